#include "shiftig/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "shiftig/baseline_align.hpp"
#include "shiftig/cardiac.hpp"
#include "shiftig/error.hpp"
#include "shiftig/fixtures.hpp"
#include "shiftig/pipeline.hpp"
#include "shiftig/report.hpp"
#include "shiftig/svg.hpp"
#include "shiftig/synth.hpp"
#include "shiftig/verify.hpp"

namespace shiftig {

namespace {

namespace fs = std::filesystem;

struct AttributeArgs {
  std::string target, baseline, model;
  std::size_t steps = kDefaultSteps;
  std::string scheme = "trapezoid";
  bool shared_shift = false;
  std::string bin_lead;
  std::optional<std::size_t> class_index;
  bool probability = false;
  bool svg = false;
  double regime_threshold = kDefaultRegimeThreshold;
  std::string out = ".";
};

struct SynthArgs {
  double bpm = 60.0;
  double duration = 10.0;
  double rate = 512.0;
  std::vector<double> lead_scales{0.6, 1.0, 0.5};
  double jitter = 0.0;
  std::optional<double> snr;
  long offset = 0;
  std::uint64_t seed = 0;
  bool exertion = false;
  std::string emit_model;
  std::string name = "synth";
  std::string out = ".";
};

struct VerifyArgs {
  std::string model;
  std::uint64_t seed = 7;
  std::size_t points = 20;
  std::size_t leads = 3;
  std::size_t samples = 64;
};

struct AlignArgs {
  std::string target, baseline;
  bool shared_shift = false;
  std::string bin_lead;
  std::string out = ".";
};

struct BinsArgs {
  std::string input;
  std::string bin_lead;
  std::string target;
  std::string out;
};

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create directory " + dir);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  f << text;
  if (!f) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::InputFileNotFound, "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void report_error(std::ostream& err, std::string_view name, const std::string& message) {
  nlohmann::json j;
  j["error"] = name;
  j["message"] = message;
  err << j.dump() << '\n';
}

int cmd_attribute(const AttributeArgs& a, std::ostream& out) {
  DifferentiableModel model = load_model_file(a.model);
  const LeadTimeMatrix target = read_csv_file(a.target);
  const LeadTimeMatrix baseline = read_csv_file(a.baseline);
  if (a.class_index) model = model.with_class_index(*a.class_index);
  if (a.probability) model = model.with_output_mode(OutputMode::probability);

  PipelineOptions opts;
  opts.steps = a.steps;
  opts.scheme = scheme_from_string(a.scheme);
  opts.shared_shift = a.shared_shift;
  if (!a.bin_lead.empty()) opts.bin_lead = a.bin_lead;
  opts.regime_threshold = a.regime_threshold;

  const PipelineResult result = run_attribution(target, baseline, model, opts);
  ensure_dir(a.out);
  write_file(fs::path(a.out) / "attribution.json", serialize(result.report));
  if (a.svg) {
    std::ostringstream svg;
    write_heatmap_svg(svg, result.target, result.report.scores);
    write_file(fs::path(a.out) / "heatmap.svg", svg.str());
  }
  out << "wrote " << (fs::path(a.out) / "attribution.json").string() << "\n";
  out << "residual " << format_double(result.report.residual) << "\n";
  if (result.degenerate) {
    out << "edge scores withheld: degenerate alignment\n";
    return kExitDegenerate;
  }
  return kExitOk;
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  SynthConfig cfg;
  cfg.heart_rate_bpm = a.bpm;
  cfg.duration_s = a.duration;
  cfg.sample_rate_hz = a.rate;
  cfg.lead_scales = a.lead_scales;
  cfg.rr_jitter_frac = a.jitter;
  cfg.noise_snr_db = a.snr;
  cfg.phase_offset_samples = a.offset;
  cfg.seed = a.seed;
  if (a.exertion) cfg = exertion_variant(cfg);
  const SynthResult res = generate(cfg);

  ensure_dir(a.out);
  std::ostringstream csv;
  write_csv(csv, res.signal);
  const fs::path csv_path = fs::path(a.out) / (a.name + ".csv");
  write_file(csv_path, csv.str());

  nlohmann::json truth;
  truth["rpeaks"] = res.rpeaks.indices;
  truth["lead_used"] = res.rpeaks.lead_used;
  truth["sample_rate_hz"] = cfg.sample_rate_hz;
  truth["heart_rate_bpm"] = cfg.heart_rate_bpm;
  truth["duration_s"] = cfg.duration_s;
  truth["samples"] = res.signal.samples();
  truth["lead_names"] = res.signal.lead_names();
  truth["phase_offset_samples"] = cfg.phase_offset_samples;
  truth["rr_jitter_frac"] = cfg.rr_jitter_frac;
  truth["noise_snr_db"] = cfg.noise_snr_db ? nlohmann::json(*cfg.noise_snr_db) : nlohmann::json(nullptr);
  truth["seed"] = cfg.seed;
  truth["exertion"] = a.exertion;
  write_file(fs::path(a.out) / (a.name + "_truth.json"), truth.dump(1) + "\n");
  out << "wrote " << csv_path.string() << " (" << res.signal.samples() << " samples, "
      << res.rpeaks.indices.size() << " beats)\n";

  if (!a.emit_model.empty()) {
    const Shape shape = res.signal.shape();
    std::optional<DifferentiableModel> model;
    if (a.emit_model == "linear") {
      model = make_linear_model(shape, a.seed);
    } else if (a.emit_model == "tanh") {
      model = make_tanh_mlp(shape, a.seed);
    } else if (a.emit_model == "relu") {
      model = make_relu_mlp(shape, a.seed);
    } else if (a.emit_model == "logits") {
      model = make_logits_mlp(shape, a.seed);
    } else if (a.emit_model == "exertion") {
      SynthConfig rest = cfg;
      rest.waves = default_waves();
      rest.noise_snr_db.reset();
      const SynthConfig ex = exertion_variant(rest);
      model = make_exertion_model(normalize(generate(rest).signal).signal,
                                  normalize(generate(ex).signal).signal, a.seed);
    } else {
      throw Error(ErrorCode::InvalidConfig, "unknown model kind '" + a.emit_model + "'");
    }
    const fs::path model_path = fs::path(a.out) / (a.name + "_model.json");
    write_file(model_path, model->to_json().dump() + "\n");
    out << "wrote " << model_path.string() << "\n";
  }
  return kExitOk;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  std::vector<NamedModel> models;
  if (!a.model.empty()) {
    models.push_back({fs::path(a.model).filename().string(), load_model_file(a.model, false)});
  } else {
    models = bundled_models({a.leads, a.samples}, a.seed);
  }
  VerifyOptions opts;
  opts.seed = a.seed;
  opts.gradient_points = a.points;
  const auto rows = run_verification(models, opts);
  print_check_table(out, rows);
  const bool ok = std::none_of(rows.begin(), rows.end(),
                               [](const CheckRow& r) { return r.status == CheckStatus::fail; });
  return ok ? kExitOk : kExitError;
}

int cmd_align(const AlignArgs& a, std::ostream& out) {
  const LeadTimeMatrix target = read_csv_file(a.target);
  const LeadTimeMatrix baseline = read_csv_file(a.baseline);
  if (target.shape() != baseline.shape()) {
    throw Error(ErrorCode::ShapeMismatch, "target and baseline shapes differ");
  }
  const LeadTimeMatrix t = normalize(target).signal;
  const LeadTimeMatrix b = normalize(baseline).signal;
  const std::string lead = a.bin_lead.empty() ? default_bin_lead(b) : a.bin_lead;
  const std::size_t period = estimate_period(b, detect_rpeaks(b, lead));
  const AlignedBaseline aligned =
      a.shared_shift ? align_baseline_shared(b, t, period) : align_baseline(b, t, period);

  // Apply the shifts found on normalized leads to the raw baseline.
  Matrix raw(baseline.leads(), baseline.samples());
  for (std::size_t i = 0; i < baseline.leads(); ++i) {
    auto src = baseline.lead(i);
    auto dst = raw.row(i);
    for (std::size_t k = 0; k < src.size(); ++k)
      dst[k] = src[(k + aligned.shift_per_lead[i]) % src.size()];
  }
  ensure_dir(a.out);
  std::ostringstream csv;
  write_csv(csv, LeadTimeMatrix(std::move(raw), baseline.lead_names(), baseline.sample_rate_hz()));
  write_file(fs::path(a.out) / "aligned_baseline.csv", csv.str());

  nlohmann::json j;
  j["period_samples"] = aligned.period_samples;
  j["shift_per_lead"] = aligned.shift_per_lead;
  j["score_per_lead"] = aligned.score_per_lead;
  j["shared_shift"] = a.shared_shift;
  j["lead_names"] = baseline.lead_names();
  write_file(fs::path(a.out) / "alignment.json", j.dump(1) + "\n");
  out << "period " << aligned.period_samples << " samples, shifts";
  for (auto s : aligned.shift_per_lead) out << ' ' << s;
  out << '\n';
  return kExitOk;
}

int cmd_bins(const BinsArgs& a, std::ostream& out) {
  const AttributionReport report = parse_report(read_file(a.input));
  const std::string lead = a.bin_lead.empty() ? report.bin_lead : a.bin_lead;
  auto it = std::find(report.lead_names.begin(), report.lead_names.end(), lead);
  if (it == report.lead_names.end()) throw Error(ErrorCode::UnknownLead, "no lead named '" + lead + "'");
  const auto lead_idx = static_cast<std::size_t>(it - report.lead_names.begin());

  std::vector<std::size_t> peaks = report.rpeaks;
  if (!a.target.empty()) {
    const LeadTimeMatrix t = normalize(read_csv_file(a.target)).signal;
    peaks = detect_rpeaks(t, lead).indices;
  }
  const BinProfile bins = bin_scores(report.scores.row(lead_idx), peaks);
  nlohmann::json j = to_json(bins);
  j["lead"] = lead;
  const std::string text = j.dump(1) + "\n";
  if (a.out.empty()) {
    out << text;
  } else {
    write_file(a.out, text);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shift-invariant integrated-gradients attribution for multi-lead ECG segments",
               "shiftig"};
  app.require_subcommand(1);

  AttributeArgs attr;
  auto* attribute = app.add_subcommand("attribute", "Attribute a target segment against a resting baseline");
  attribute->add_option("--target", attr.target, "Target segment CSV")->required();
  attribute->add_option("--baseline", attr.baseline, "Resting baseline CSV")->required();
  attribute->add_option("--model", attr.model, "Model weights JSON")->required();
  attribute->add_option("--steps", attr.steps, "Quadrature steps m")->check(CLI::PositiveNumber);
  attribute->add_option("--scheme", attr.scheme, "trapezoid or midpoint")
      ->check(CLI::IsMember({"trapezoid", "midpoint"}));
  attribute->add_flag("--shared-shift", attr.shared_shift, "Use one baseline shift for all leads");
  attribute->add_option("--bin-lead", attr.bin_lead, "Lead for R-peaks and binning");
  attribute->add_option("--class-index", attr.class_index, "Override the model's class index");
  attribute->add_flag("--probability", attr.probability, "Attribute the softmax probability");
  attribute->add_flag("--svg", attr.svg, "Also write heatmap.svg");
  attribute->add_option("--regime-threshold", attr.regime_threshold, "Near-zero fraction of max |W|");
  attribute->add_option("--out", attr.out, "Output directory");

  SynthArgs syn;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic multi-lead ECG");
  synth->add_option("--bpm", syn.bpm, "Heart rate");
  synth->add_option("--duration", syn.duration, "Duration in seconds");
  synth->add_option("--rate", syn.rate, "Sample rate in Hz");
  synth->add_option("--lead-scales", syn.lead_scales, "Per-lead amplitude scales")->delimiter(',');
  synth->add_option("--jitter", syn.jitter, "R-R jitter fraction");
  synth->add_option("--snr", syn.snr, "Additive white noise SNR in dB");
  synth->add_option("--offset", syn.offset, "Circular phase offset in samples");
  synth->add_option("--seed", syn.seed, "Random seed");
  synth->add_flag("--exertion", syn.exertion, "Exertion morphology (larger T, faded P)");
  synth->add_option("--emit-model", syn.emit_model, "Also write a model: linear|tanh|relu|logits|exertion");
  synth->add_option("--name", syn.name, "Output file stem");
  synth->add_option("--out", syn.out, "Output directory");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Gradient, completeness and edge-score checks");
  verify->add_option("--model", ver.model, "Model weights JSON (default: bundled fixtures)");
  verify->add_option("--seed", ver.seed, "Random seed");
  verify->add_option("--points", ver.points, "Random points for the gradient check");
  verify->add_option("--leads", ver.leads, "Leads of the bundled fixtures");
  verify->add_option("--samples", ver.samples, "Samples of the bundled fixtures");

  AlignArgs al;
  auto* align = app.add_subcommand("align", "Align a resting baseline to a target");
  align->add_option("--target", al.target, "Target segment CSV")->required();
  align->add_option("--baseline", al.baseline, "Resting baseline CSV")->required();
  align->add_flag("--shared-shift", al.shared_shift, "Use one shift for all leads");
  align->add_option("--bin-lead", al.bin_lead, "Lead for R-peak detection");
  align->add_option("--out", al.out, "Output directory");

  BinsArgs bn;
  auto* bins = app.add_subcommand("bins", "Re-bin an existing attribution.json");
  bins->add_option("--input", bn.input, "attribution.json")->required();
  bins->add_option("--bin-lead", bn.bin_lead, "Lead to bin");
  bins->add_option("--target", bn.target, "Target CSV to re-detect R-peaks");
  bins->add_option("--out", bn.out, "Output file (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "UsageError", e.what());
    return kExitError;
  }

  try {
    if (attribute->parsed()) return cmd_attribute(attr, out);
    if (synth->parsed()) return cmd_synth(syn, out);
    if (verify->parsed()) return cmd_verify(ver, out);
    if (align->parsed()) return cmd_align(al, out);
    if (bins->parsed()) return cmd_bins(bn, out);
  } catch (const Error& e) {
    report_error(err, e.name(), e.what());
    return kExitError;
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what());
    return kExitError;
  }
  return kExitError;
}

}  // namespace shiftig

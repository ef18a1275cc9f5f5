#include "shiftig/pipeline.hpp"

#include <algorithm>

#include "shiftig/baseline_align.hpp"
#include "shiftig/cardiac.hpp"
#include "shiftig/error.hpp"
#include "shiftig/lead_alignment.hpp"

namespace shiftig {

std::string default_bin_lead(const LeadTimeMatrix& x) {
  const auto& names = x.lead_names();
  if (std::find(names.begin(), names.end(), "II") != names.end()) return "II";
  return names.front();
}

PipelineResult run_attribution(const LeadTimeMatrix& target, const LeadTimeMatrix& baseline,
                               const ModelFunction& model, const PipelineOptions& options) {
  if (target.shape() != baseline.shape()) {
    throw Error(ErrorCode::ShapeMismatch, "target and baseline shapes differ");
  }
  if (target.lead_names() != baseline.lead_names()) {
    throw Error(ErrorCode::ShapeMismatch, "target and baseline lead names differ");
  }
  AttributionReport report;
  const NormalizeResult t = normalize(target);
  const NormalizeResult b = normalize(baseline);
  for (std::size_t i : t.constant_leads)
    report.warnings.push_back("target lead " + target.lead_names()[i] + " is constant");
  for (std::size_t i : b.constant_leads)
    report.warnings.push_back("baseline lead " + baseline.lead_names()[i] + " is constant");

  const std::string lead = options.bin_lead.value_or(default_bin_lead(target));
  const std::size_t lead_idx = target.lead_index(lead);

  const RPeakList baseline_peaks = detect_rpeaks(b.signal, lead_idx);
  const std::size_t period = std::min(estimate_period(b.signal, baseline_peaks), t.signal.samples());
  const AlignedBaseline aligned = options.shared_shift
                                      ? align_baseline_shared(b.signal, t.signal, period)
                                      : align_baseline(b.signal, t.signal, period);

  const PathSpec path{aligned.baseline, t.signal, options.steps, options.scheme};
  const AttributionMap ig = integrated_gradients(model, path);

  report.lead_names = target.lead_names();
  report.scores = ig.scores;
  report.f_target = ig.f_target;
  report.f_baseline = ig.f_baseline;
  report.residual = ig.completeness_residual;
  report.steps = ig.steps_used;
  report.scheme = to_string(ig.scheme);
  report.period_samples = aligned.period_samples;
  report.shift_per_lead = aligned.shift_per_lead;
  report.score_per_lead = aligned.score_per_lead;

  bool degenerate = false;
  if (target.leads() >= 2) {
    const AlignmentMatrix w = alignment_scores(ig, delta(t.signal, aligned.baseline));
    report.w = w.w;
    try {
      const EdgeScoreMatrix e = edge_scores(w, ig.f_target, ig.f_baseline);
      report.e = e.e;
      report.lambda = e.lambda;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::DegenerateAlignment) throw;
      degenerate = true;
      report.warnings.push_back("degenerate alignment: edge scores withheld");
    }
    const RegimeLabelMatrix regimes = classify_regimes(w, options.regime_threshold);
    report.regime_threshold = regimes.threshold;
    report.regimes = regimes.labels;
  } else {
    report.w = Matrix(1, 1);
    degenerate = true;
    report.warnings.push_back("single lead: no lead pairs to align");
    report.regimes = {{Regime::near_zero}};
  }

  const RPeakList target_peaks = detect_rpeaks(t.signal, lead_idx);
  report.bin_lead = lead;
  report.rpeaks = target_peaks.indices;
  report.bins = bin_attributions(ig, target_peaks, lead_idx);

  return {std::move(report), t.signal, aligned.baseline, degenerate};
}

}  // namespace shiftig

#include "shiftig/report.hpp"

#include "shiftig/error.hpp"

namespace shiftig {

namespace {

nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  return Matrix::from_rows(j.get<std::vector<std::vector<double>>>());
}

}  // namespace

bool operator==(const BinProfile& a, const BinProfile& b) {
  return a.totals == b.totals && a.counts == b.counts && a.cycles_used == b.cycles_used &&
         a.coverage_fraction == b.coverage_fraction;
}

nlohmann::json to_json(const BinProfile& bins) {
  nlohmann::json j;
  j["totals"] = bins.totals;
  j["counts"] = bins.counts;
  j["labels"] = std::vector<std::string>(kBinLabels.begin(), kBinLabels.end());
  j["cycles_used"] = bins.cycles_used;
  j["coverage_fraction"] = bins.coverage_fraction;
  return j;
}

BinProfile bin_profile_from_json(const nlohmann::json& j) {
  BinProfile b;
  b.totals = j.at("totals").get<std::array<double, kBins>>();
  b.counts = j.at("counts").get<std::array<std::size_t, kBins>>();
  b.cycles_used = j.value("cycles_used", std::size_t{0});
  b.coverage_fraction = j.value("coverage_fraction", 0.0);
  return b;
}

nlohmann::json to_json(const AttributionReport& r) {
  nlohmann::json j;
  j["lead_names"] = r.lead_names;
  j["scores"] = matrix_json(r.scores);
  j["f_target"] = r.f_target;
  j["f_baseline"] = r.f_baseline;
  j["residual"] = r.residual;
  j["steps"] = r.steps;
  j["scheme"] = r.scheme;
  j["period_samples"] = r.period_samples;
  j["shift_per_lead"] = r.shift_per_lead;
  j["score_per_lead"] = r.score_per_lead;
  j["W"] = matrix_json(r.w);
  j["E"] = r.e ? matrix_json(*r.e) : nlohmann::json(nullptr);
  j["lambda"] = r.lambda ? nlohmann::json(*r.lambda) : nlohmann::json(nullptr);
  j["regime_threshold"] = r.regime_threshold;
  nlohmann::json regimes = nlohmann::json::array();
  for (const auto& row : r.regimes) {
    nlohmann::json jr = nlohmann::json::array();
    for (Regime g : row) jr.push_back(to_string(g));
    regimes.push_back(std::move(jr));
  }
  j["regimes"] = std::move(regimes);
  j["bin_lead"] = r.bin_lead;
  j["rpeaks"] = r.rpeaks;
  j["bins"] = to_json(r.bins);
  j["warnings"] = r.warnings;
  return j;
}

AttributionReport report_from_json(const nlohmann::json& j) {
  try {
    AttributionReport r;
    r.lead_names = j.value("lead_names", std::vector<std::string>{});
    r.scores = matrix_from_json(j.at("scores"));
    r.f_target = j.at("f_target").get<double>();
    r.f_baseline = j.at("f_baseline").get<double>();
    r.residual = j.at("residual").get<double>();
    r.steps = j.value("steps", std::size_t{0});
    r.scheme = j.value("scheme", std::string());
    r.period_samples = j.value("period_samples", std::size_t{0});
    r.shift_per_lead = j.at("shift_per_lead").get<std::vector<std::size_t>>();
    r.score_per_lead = j.value("score_per_lead", std::vector<double>{});
    r.w = matrix_from_json(j.at("W"));
    if (!j.at("E").is_null()) r.e = matrix_from_json(j.at("E"));
    if (!j.at("lambda").is_null()) r.lambda = j.at("lambda").get<double>();
    r.regime_threshold = j.value("regime_threshold", 0.0);
    for (const auto& row : j.at("regimes")) {
      std::vector<Regime> labels;
      for (const auto& v : row) labels.push_back(regime_from_string(v.get<std::string>()));
      r.regimes.push_back(std::move(labels));
    }
    r.bin_lead = j.value("bin_lead", std::string());
    r.rpeaks = j.value("rpeaks", std::vector<std::size_t>{});
    r.bins = bin_profile_from_json(j.at("bins"));
    r.warnings = j.value("warnings", std::vector<std::string>{});
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed attribution document: ") + e.what());
  }
}

std::string serialize(const AttributionReport& report) { return to_json(report).dump(1) + "\n"; }

AttributionReport parse_report(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("attribution file is not valid JSON: ") + e.what());
  }
  return report_from_json(j);
}

}  // namespace shiftig

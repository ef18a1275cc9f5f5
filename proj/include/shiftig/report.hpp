#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shiftig/baseline_align.hpp"
#include "shiftig/cardiac.hpp"
#include "shiftig/lead_alignment.hpp"
#include "shiftig/matrix.hpp"

namespace shiftig {

// Everything `attribute` writes to attribution.json.
struct AttributionReport {
  std::vector<std::string> lead_names;
  Matrix scores;
  double f_target = 0.0;
  double f_baseline = 0.0;
  double residual = 0.0;
  std::size_t steps = 0;
  std::string scheme;
  std::size_t period_samples = 0;
  std::vector<std::size_t> shift_per_lead;
  std::vector<double> score_per_lead;
  Matrix w;
  std::optional<Matrix> e;  // absent in the degenerate regime
  std::optional<double> lambda;
  double regime_threshold = 0.0;
  std::vector<std::vector<Regime>> regimes;
  std::string bin_lead;
  std::vector<std::size_t> rpeaks;  // target R-peaks used for binning
  BinProfile bins;
  std::vector<std::string> warnings;

  friend bool operator==(const AttributionReport&, const AttributionReport&) = default;
};

bool operator==(const BinProfile& a, const BinProfile& b);

nlohmann::json to_json(const BinProfile& bins);
BinProfile bin_profile_from_json(const nlohmann::json& j);

nlohmann::json to_json(const AttributionReport& report);
// Throws ParseError for documents that do not follow the schema.
AttributionReport report_from_json(const nlohmann::json& j);

std::string serialize(const AttributionReport& report);
AttributionReport parse_report(const std::string& text);

}  // namespace shiftig

#pragma once

#include <optional>
#include <string>

#include "shiftig/attribution.hpp"
#include "shiftig/model.hpp"
#include "shiftig/report.hpp"
#include "shiftig/signal.hpp"

namespace shiftig {

struct PipelineOptions {
  std::size_t steps = kDefaultSteps;
  QuadratureScheme scheme = QuadratureScheme::trapezoid;
  bool shared_shift = false;
  // Lead used for R-peak detection and binning; defaults to "II" when
  // present, otherwise the first lead.
  std::optional<std::string> bin_lead;
  double regime_threshold = kDefaultRegimeThreshold;
};

struct PipelineResult {
  AttributionReport report;
  LeadTimeMatrix target;            // normalized
  LeadTimeMatrix aligned_baseline;  // normalized, shifted
  bool degenerate = false;          // edge scores unavailable
};

std::string default_bin_lead(const LeadTimeMatrix& x);

// normalize -> R-peaks of the baseline -> period -> baseline alignment ->
// integrated gradients -> W -> E (unless degenerate) -> regimes -> bins.
PipelineResult run_attribution(const LeadTimeMatrix& target, const LeadTimeMatrix& baseline,
                               const ModelFunction& model, const PipelineOptions& options = {});

}  // namespace shiftig

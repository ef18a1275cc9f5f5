#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "shiftig/attribution.hpp"
#include "shiftig/signal.hpp"

namespace shiftig {

struct RPeakList {
  std::vector<std::size_t> indices;  // strictly increasing
  std::string lead_used;
  double sample_rate_hz = 0.0;
};

struct DetectorParams {
  double smoothing_window_s = 0.150;
  double threshold_fraction = 0.5;
  double refractory_s = 0.200;
  double refine_half_window_s = 0.025;
  // Half width of the window the adaptive threshold's rolling max spans.
  double rolling_max_half_window_s = 1.5;
};

// Energy detector: 5-point derivative, squared, centred moving average,
// threshold at a fraction of the rolling max, refractory suppression and a
// final local-max refinement on the raw lead. Throws NoPeaksFound, and
// InvalidConfig when the lead is shorter than one second.
RPeakList detect_rpeaks(const LeadTimeMatrix& x, const std::string& lead,
                        const DetectorParams& params = {});
RPeakList detect_rpeaks(const LeadTimeMatrix& x, std::size_t lead,
                        const DetectorParams& params = {});

inline constexpr std::size_t kBins = 4;

// Annotations only; bins are equal splits of each RR interval.
inline constexpr std::array<const char*, kBins> kBinLabels{"ST", "T", "P", "PQ"};

struct BinProfile {
  std::array<double, kBins> totals{};
  std::array<std::size_t, kBins> counts{};
  std::size_t cycles_used = 0;
  double coverage_fraction = 0.0;
};

// Sizes of the four bins of one RR interval of the given length; the
// remainder goes one sample each to the leading bins.
std::array<std::size_t, kBins> bin_sizes(std::size_t rr_length);

// Bins one lead's scores over the cycles [r_k, r_{k+1}). Throws
// InsufficientPeaks for fewer than two peaks.
BinProfile bin_scores(std::span<const double> scores, const std::vector<std::size_t>& peaks);

BinProfile bin_attributions(const AttributionMap& a, const RPeakList& peaks,
                            const std::string& lead);
BinProfile bin_attributions(const AttributionMap& a, const RPeakList& peaks, std::size_t lead);

// Per-bin mean of totals weighted by cycles_used. Counts and cycles add up,
// coverage is cycle-weighted. Throws EmptyInput for an empty list or when no
// profile has any cycles.
BinProfile average_bin_profile(const std::vector<BinProfile>& profiles);

}  // namespace shiftig

#pragma once

#include <cstddef>
#include <vector>

#include "shiftig/cardiac.hpp"
#include "shiftig/signal.hpp"

namespace shiftig {

// Baseline re-indexed per lead so that aligned[i][k] = b[i][(k + s_i) mod T].
struct AlignedBaseline {
  LeadTimeMatrix baseline;
  std::vector<std::size_t> shift_per_lead;
  std::vector<double> score_per_lead;  // winning |<t_i, shifted b_i>|
  std::size_t period_samples = 0;
};

// Rounded mean R-R spacing in samples. Throws InsufficientPeaks for fewer
// than two peaks and InvalidPeriod if the result is below two samples.
std::size_t estimate_period(const LeadTimeMatrix& x, const RPeakList& rpeaks);

// n[p] = sum_k t[k] * b[(k + p) mod T] for p in [0, period).
std::vector<double> circular_correlation(std::span<const double> target,
                                         std::span<const double> baseline, std::size_t period);

// Per-lead argmax of |n[p]|; smallest p wins ties. Throws ShapeMismatch
// and InvalidPeriod (unless 2 <= period <= T).
AlignedBaseline align_baseline(const LeadTimeMatrix& b, const LeadTimeMatrix& t,
                               std::size_t period);

// One shift for all leads, maximizing sum_i |n_i[p]|. score_per_lead still
// holds each lead's |n_i[s]| at the shared shift.
AlignedBaseline align_baseline_shared(const LeadTimeMatrix& b, const LeadTimeMatrix& t,
                                      std::size_t period);

}  // namespace shiftig

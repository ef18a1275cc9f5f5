#include "shiftig/baseline_align.hpp"

#include <cmath>

#include "shiftig/error.hpp"
#include "shiftig/parallel.hpp"

namespace shiftig {

namespace {

void check_inputs(const LeadTimeMatrix& b, const LeadTimeMatrix& t, std::size_t period) {
  if (b.shape() != t.shape()) {
    throw Error(ErrorCode::ShapeMismatch, "baseline and target shapes differ");
  }
  if (period < 2 || period > t.samples()) {
    throw Error(ErrorCode::InvalidPeriod, "period must satisfy 2 <= P <= T");
  }
}

std::size_t argmax_abs(const std::vector<double>& n) {
  std::size_t best = 0;
  for (std::size_t p = 1; p < n.size(); ++p) {
    if (std::abs(n[p]) > std::abs(n[best])) best = p;
  }
  return best;
}

LeadTimeMatrix reindex(const LeadTimeMatrix& b, const std::vector<std::size_t>& shifts) {
  const std::size_t len = b.samples();
  Matrix out(b.leads(), len);
  for (std::size_t i = 0; i < b.leads(); ++i) {
    auto src = b.lead(i);
    auto dst = out.row(i);
    for (std::size_t k = 0; k < len; ++k) dst[k] = src[(k + shifts[i]) % len];
  }
  return LeadTimeMatrix(std::move(out), b.lead_names(), b.sample_rate_hz());
}

std::vector<std::vector<double>> correlations(const LeadTimeMatrix& b, const LeadTimeMatrix& t,
                                              std::size_t period) {
  std::vector<std::vector<double>> n(b.leads());
  parallel_for(b.leads(), [&](std::size_t i) {
    n[i] = circular_correlation(t.lead(i), b.lead(i), period);
  });
  return n;
}

}  // namespace

std::size_t estimate_period(const LeadTimeMatrix& x, const RPeakList& rpeaks) {
  const auto& r = rpeaks.indices;
  if (r.size() < 2) {
    throw Error(ErrorCode::InsufficientPeaks, "period estimation needs at least two R-peaks");
  }
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (r[k] >= x.samples() || (k > 0 && r[k] <= r[k - 1])) {
      throw Error(ErrorCode::InsufficientPeaks, "R-peaks must increase and lie inside the segment");
    }
  }
  const double mean = static_cast<double>(r.back() - r.front()) / static_cast<double>(r.size() - 1);
  const auto period = static_cast<std::size_t>(std::llround(mean));
  if (period < 2) throw Error(ErrorCode::InvalidPeriod, "estimated period below two samples");
  return period;
}

std::vector<double> circular_correlation(std::span<const double> target,
                                         std::span<const double> baseline, std::size_t period) {
  const std::size_t len = target.size();
  if (baseline.size() != len) throw Error(ErrorCode::ShapeMismatch, "lead lengths differ");
  if (period < 1 || period > len) throw Error(ErrorCode::InvalidPeriod, "period out of range");
  std::vector<double> n(period, 0.0);
  for (std::size_t p = 0; p < period; ++p) {
    double s = 0.0;
    // Split at the wrap point instead of taking a modulus per sample.
    const std::size_t head = len - p;
    for (std::size_t k = 0; k < head; ++k) s += target[k] * baseline[k + p];
    for (std::size_t k = head; k < len; ++k) s += target[k] * baseline[k + p - len];
    n[p] = s;
  }
  return n;
}

AlignedBaseline align_baseline(const LeadTimeMatrix& b, const LeadTimeMatrix& t,
                               std::size_t period) {
  check_inputs(b, t, period);
  const auto n = correlations(b, t, period);
  std::vector<std::size_t> shifts(b.leads());
  std::vector<double> scores(b.leads());
  for (std::size_t i = 0; i < b.leads(); ++i) {
    shifts[i] = argmax_abs(n[i]);
    scores[i] = std::abs(n[i][shifts[i]]);
  }
  return {reindex(b, shifts), shifts, std::move(scores), period};
}

AlignedBaseline align_baseline_shared(const LeadTimeMatrix& b, const LeadTimeMatrix& t,
                                      std::size_t period) {
  check_inputs(b, t, period);
  const auto n = correlations(b, t, period);
  std::vector<double> total(period, 0.0);
  for (std::size_t p = 0; p < period; ++p)
    for (std::size_t i = 0; i < b.leads(); ++i) total[p] += std::abs(n[i][p]);
  const std::size_t s = argmax_abs(total);
  std::vector<std::size_t> shifts(b.leads(), s);
  std::vector<double> scores(b.leads());
  for (std::size_t i = 0; i < b.leads(); ++i) scores[i] = std::abs(n[i][s]);
  return {reindex(b, shifts), shifts, std::move(scores), period};
}

}  // namespace shiftig

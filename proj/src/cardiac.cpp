#include "shiftig/cardiac.hpp"

#include <algorithm>
#include <cmath>

#include "shiftig/error.hpp"

namespace shiftig {

namespace {

std::size_t samples_for(double seconds, double rate) {
  return static_cast<std::size_t>(std::lround(seconds * rate));
}

std::vector<double> energy(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> e(n, 0.0);
  auto at = [&](long k) {
    k = std::clamp<long>(k, 0, static_cast<long>(n) - 1);
    return x[static_cast<std::size_t>(k)];
  };
  for (std::size_t k = 0; k < n; ++k) {
    const long i = static_cast<long>(k);
    const double d = (-at(i - 2) - 2.0 * at(i - 1) + 2.0 * at(i + 1) + at(i + 2)) / 8.0;
    e[k] = d * d;
  }
  return e;
}

// Centred moving average over 2*half+1 samples, truncated at the edges.
std::vector<double> moving_average(const std::vector<double>& v, std::size_t half) {
  const std::size_t n = v.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + v[k];
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k >= half ? k - half : 0;
    const std::size_t hi = std::min(n, k + half + 1);
    out[k] = (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
  }
  return out;
}

std::vector<double> rolling_max(const std::vector<double>& v, std::size_t half) {
  const std::size_t n = v.size();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k >= half ? k - half : 0;
    const std::size_t hi = std::min(n, k + half + 1);
    out[k] = *std::max_element(v.begin() + static_cast<long>(lo), v.begin() + static_cast<long>(hi));
  }
  return out;
}

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + static_cast<long>(v.size() / 2), v.end());
  return v[v.size() / 2];
}

}  // namespace

RPeakList detect_rpeaks(const LeadTimeMatrix& x, std::size_t lead, const DetectorParams& params) {
  if (lead >= x.leads()) throw Error(ErrorCode::UnknownLead, "lead index out of range");
  const double fs = x.sample_rate_hz();
  if (static_cast<double>(x.samples()) < fs) {
    throw Error(ErrorCode::InvalidConfig, "R-peak detection needs at least one second of signal");
  }
  auto raw = x.lead(lead);
  const std::size_t n = raw.size();

  const auto smooth =
      moving_average(energy(raw), samples_for(params.smoothing_window_s, fs) / 2);
  const double peak_energy = *std::max_element(smooth.begin(), smooth.end());
  if (!(peak_energy > 0.0)) {
    throw Error(ErrorCode::NoPeaksFound, "lead '" + x.lead_names()[lead] + "' has no energy");
  }
  const auto envelope = rolling_max(smooth, samples_for(params.rolling_max_half_window_s, fs));

  // The smoothed envelope peaks late when a T wave sits inside the window, so
  // each above-threshold run is anchored on its largest raw deviation instead.
  const double level = median(std::vector<double>(raw.begin(), raw.end()));
  struct Candidate {
    std::size_t index;
    double strength;
  };
  std::vector<Candidate> candidates;
  std::size_t k = 0;
  while (k < n) {
    if (!(smooth[k] > params.threshold_fraction * envelope[k])) {
      ++k;
      continue;
    }
    const std::size_t begin = k;
    double top = 0.0;
    std::size_t at = begin;
    for (; k < n && smooth[k] > params.threshold_fraction * envelope[k]; ++k) {
      top = std::max(top, smooth[k]);
      if (std::abs(raw[k] - level) > std::abs(raw[at] - level)) at = k;
    }
    candidates.push_back({at, top});
  }

  const std::size_t refractory = samples_for(params.refractory_s, fs);
  std::vector<Candidate> kept;
  for (const auto& c : candidates) {
    if (!kept.empty() && c.index - kept.back().index < refractory) {
      if (c.strength > kept.back().strength) kept.back() = c;
      continue;
    }
    kept.push_back(c);
  }

  // Refine to the largest deviation from the lead's median level.
  const std::size_t half = samples_for(params.refine_half_window_s, fs);
  RPeakList out{{}, x.lead_names()[lead], fs};
  for (const auto& c : kept) {
    const std::size_t lo = c.index >= half ? c.index - half : 0;
    const std::size_t hi = std::min(n - 1, c.index + half);
    std::size_t best = lo;
    for (std::size_t j = lo; j <= hi; ++j) {
      if (std::abs(raw[j] - level) > std::abs(raw[best] - level)) best = j;
    }
    // A maximum on the first or last sample is a beat cut off by the segment edge.
    if (best == 0 || best == n - 1) continue;
    if (out.indices.empty() || best > out.indices.back()) out.indices.push_back(best);
  }
  if (out.indices.empty()) {
    throw Error(ErrorCode::NoPeaksFound, "no R-peaks found on lead '" + x.lead_names()[lead] + "'");
  }
  return out;
}

RPeakList detect_rpeaks(const LeadTimeMatrix& x, const std::string& lead,
                        const DetectorParams& params) {
  return detect_rpeaks(x, x.lead_index(lead), params);
}

std::array<std::size_t, kBins> bin_sizes(std::size_t rr_length) {
  std::array<std::size_t, kBins> sizes{};
  const std::size_t base = rr_length / kBins;
  const std::size_t rem = rr_length % kBins;
  for (std::size_t b = 0; b < kBins; ++b) sizes[b] = base + (b < rem ? 1 : 0);
  return sizes;
}

BinProfile bin_scores(std::span<const double> scores, const std::vector<std::size_t>& peaks) {
  if (peaks.size() < 2) {
    throw Error(ErrorCode::InsufficientPeaks, "binning needs at least two R-peaks");
  }
  BinProfile out;
  std::size_t covered = 0;
  for (std::size_t c = 0; c + 1 < peaks.size(); ++c) {
    const std::size_t start = peaks[c];
    const std::size_t stop = peaks[c + 1];
    if (stop <= start || stop > scores.size()) {
      throw Error(ErrorCode::InsufficientPeaks, "R-peaks must increase and lie inside the segment");
    }
    const auto sizes = bin_sizes(stop - start);
    std::size_t pos = start;
    for (std::size_t b = 0; b < kBins; ++b) {
      for (std::size_t j = 0; j < sizes[b]; ++j) out.totals[b] += scores[pos++];
      out.counts[b] += sizes[b];
    }
    covered += stop - start;
    ++out.cycles_used;
  }
  out.coverage_fraction = static_cast<double>(covered) / static_cast<double>(scores.size());
  return out;
}

BinProfile bin_attributions(const AttributionMap& a, const RPeakList& peaks, std::size_t lead) {
  if (lead >= a.scores.rows()) throw Error(ErrorCode::UnknownLead, "lead index out of range");
  return bin_scores(a.scores.row(lead), peaks.indices);
}

BinProfile bin_attributions(const AttributionMap& a, const RPeakList& peaks,
                            const std::string& lead) {
  auto it = std::find(a.lead_names.begin(), a.lead_names.end(), lead);
  if (it == a.lead_names.end()) throw Error(ErrorCode::UnknownLead, "no lead named '" + lead + "'");
  return bin_attributions(a, peaks, static_cast<std::size_t>(it - a.lead_names.begin()));
}

BinProfile average_bin_profile(const std::vector<BinProfile>& profiles) {
  if (profiles.empty()) throw Error(ErrorCode::EmptyInput, "no bin profiles to average");
  std::size_t cycles = 0;
  for (const auto& p : profiles) cycles += p.cycles_used;
  if (cycles == 0) throw Error(ErrorCode::EmptyInput, "bin profiles cover no cycles");

  BinProfile out;
  out.cycles_used = cycles;
  for (const auto& p : profiles) {
    const double w = static_cast<double>(p.cycles_used) / static_cast<double>(cycles);
    for (std::size_t b = 0; b < kBins; ++b) {
      out.totals[b] += w * p.totals[b];
      out.counts[b] += p.counts[b];
    }
    out.coverage_fraction += w * p.coverage_fraction;
  }
  return out;
}

}  // namespace shiftig

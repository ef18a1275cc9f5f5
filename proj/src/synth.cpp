#include "shiftig/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "shiftig/error.hpp"

namespace shiftig {

std::array<WaveParams, kWaveCount> default_waves() {
  return {{
      {-0.28, 0.100, 0.15},  // P
      {-0.04, 0.040, -0.10},  // Q
      {0.00, 0.040, 1.00},   // R
      {0.04, 0.040, -0.25},  // S
      {0.38, 0.160, 0.30},   // T
  }};
}

void validate(const SynthConfig& cfg) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  if (!(cfg.sample_rate_hz > 0.0) || !std::isfinite(cfg.sample_rate_hz)) fail("sample rate must be positive");
  if (!(cfg.duration_s > 0.0) || !std::isfinite(cfg.duration_s)) fail("duration must be positive");
  if (!(cfg.heart_rate_bpm > 0.0) || !std::isfinite(cfg.heart_rate_bpm)) fail("heart rate must be positive");
  if (cfg.lead_scales.empty()) fail("at least one lead is required");
  for (double s : cfg.lead_scales) {
    if (!std::isfinite(s)) fail("lead scales must be finite");
  }
  if (!(cfg.rr_jitter_frac >= 0.0 && cfg.rr_jitter_frac < 0.5)) fail("jitter must lie in [0, 0.5)");
  if (!(cfg.first_beat_fraction >= 0.0 && cfg.first_beat_fraction <= 1.0)) {
    fail("first beat fraction must lie in [0, 1]");
  }
  if (cfg.noise_snr_db && !std::isfinite(*cfg.noise_snr_db)) fail("SNR must be finite");
  const auto samples = std::llround(cfg.duration_s * cfg.sample_rate_hz);
  if (samples < 2) fail("signal must have at least two samples");
  double min_sigma = std::numeric_limits<double>::infinity();
  for (const auto& w : cfg.waves) {
    if (!(w.width_s > 0.0) || !std::isfinite(w.center_fraction) || !std::isfinite(w.amplitude_mv)) {
      fail("wave widths must be positive and parameters finite");
    }
    min_sigma = std::min(min_sigma, w.width_s / 4.0);
  }
  // Gaussian bandwidth taken at three standard deviations in frequency.
  const double bandwidth = 3.0 / (2.0 * std::numbers::pi * min_sigma);
  if (!(cfg.sample_rate_hz > 2.0 * bandwidth)) fail("sample rate too low for the narrowest wave");
}

SynthResult generate(const SynthConfig& cfg) {
  validate(cfg);
  const double fs = cfg.sample_rate_hz;
  const auto n = static_cast<std::size_t>(std::llround(cfg.duration_s * fs));
  const double rr_nominal = 60.0 / cfg.heart_rate_bpm * fs;  // samples

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  auto next_interval = [&]() {
    const double scale = cfg.rr_jitter_frac > 0.0 ? 1.0 + cfg.rr_jitter_frac * jitter(rng) : 1.0;
    return std::max(1.0, std::round(rr_nominal * scale));
  };

  // R positions, with one beat of padding on each side for the wave tails.
  std::vector<double> beats;
  double pos = std::round(cfg.first_beat_fraction * rr_nominal);
  beats.push_back(pos - std::round(rr_nominal));
  while (pos < static_cast<double>(n)) {
    beats.push_back(pos);
    pos += next_interval();
  }
  beats.push_back(pos);

  std::vector<double> clean(n, 0.0);
  for (std::size_t b = 0; b < beats.size(); ++b) {
    const double r = beats[b];
    const double rr_prev = b > 0 ? r - beats[b - 1] : rr_nominal;
    const double rr_next = b + 1 < beats.size() ? beats[b + 1] - r : rr_nominal;
    for (const auto& w : cfg.waves) {
      const double rr = w.center_fraction < 0.0 ? rr_prev : rr_next;
      const double center = r + w.center_fraction * rr;
      const double sigma = w.width_s / 4.0 * fs;
      const double reach = 8.0 * sigma;
      const auto lo = static_cast<long>(std::max(0.0, std::ceil(center - reach)));
      const auto hi = static_cast<long>(std::min(static_cast<double>(n) - 1.0, std::floor(center + reach)));
      for (long k = lo; k <= hi; ++k) {
        const double z = (static_cast<double>(k) - center) / sigma;
        clean[static_cast<std::size_t>(k)] += w.amplitude_mv * std::exp(-0.5 * z * z);
      }
    }
  }

  const std::size_t c = cfg.lead_scales.size();
  Matrix data(c, n);
  for (std::size_t i = 0; i < c; ++i) {
    auto row = data.row(i);
    for (std::size_t k = 0; k < n; ++k) row[k] = cfg.lead_scales[i] * clean[k];
  }
  LeadTimeMatrix signal(std::move(data), default_lead_names(c), fs);

  std::vector<std::size_t> peaks;
  for (double r : beats) {
    if (r >= 0.0 && r < static_cast<double>(n)) peaks.push_back(static_cast<std::size_t>(r));
  }
  if (cfg.phase_offset_samples != 0) {
    signal = rotate(signal, cfg.phase_offset_samples);
    const long len = static_cast<long>(n);
    const long shift = ((cfg.phase_offset_samples % len) + len) % len;
    for (auto& p : peaks) p = static_cast<std::size_t>((static_cast<long>(p) + shift) % len);
    std::sort(peaks.begin(), peaks.end());
  }

  if (cfg.noise_snr_db) {
    Matrix noisy = signal.data();
    const double ratio = std::pow(10.0, *cfg.noise_snr_db / 10.0);
    for (std::size_t i = 0; i < c; ++i) {
      auto row = noisy.row(i);
      double power = 0.0;
      for (double v : row) power += v * v;
      power /= static_cast<double>(n);
      if (power == 0.0) continue;
      std::normal_distribution<double> noise(0.0, std::sqrt(power / ratio));
      for (double& v : row) v += noise(rng);
    }
    signal = LeadTimeMatrix(std::move(noisy), signal.lead_names(), fs);
  }

  return {std::move(signal), RPeakList{std::move(peaks), default_lead_names(c)[c > 1 ? 1 : 0], fs}};
}

SynthConfig exertion_variant(SynthConfig cfg, double t_gain, double t_broadening, double p_gain) {
  cfg.waves[kWaveT].amplitude_mv *= t_gain;
  cfg.waves[kWaveT].width_s *= t_broadening;
  cfg.waves[kWaveP].amplitude_mv *= p_gain;
  return cfg;
}

}  // namespace shiftig

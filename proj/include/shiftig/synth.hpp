#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "shiftig/cardiac.hpp"
#include "shiftig/signal.hpp"

namespace shiftig {

// One Gaussian deflection of a beat. The centre is a fraction of the R-R
// interval relative to the R peak (negative = before R). width_s is the full
// width of the bump, taken as four standard deviations.
struct WaveParams {
  double center_fraction = 0.0;
  double width_s = 0.04;
  double amplitude_mv = 1.0;
};

enum Wave : std::size_t { kWaveP = 0, kWaveQ, kWaveR, kWaveS, kWaveT, kWaveCount };

std::array<WaveParams, kWaveCount> default_waves();

struct SynthConfig {
  double sample_rate_hz = 512.0;
  double duration_s = 10.0;
  double heart_rate_bpm = 60.0;
  // One entry per lead; the lead count is the size of this list.
  std::vector<double> lead_scales{0.6, 1.0, 0.5};
  std::array<WaveParams, kWaveCount> waves = default_waves();
  // Each R-R interval is scaled by 1 + U(-jitter, jitter).
  double rr_jitter_frac = 0.0;
  std::optional<double> noise_snr_db;
  // Output is the clean signal delayed circularly by this many samples.
  long phase_offset_samples = 0;
  std::uint64_t seed = 0;
  // Position of the first R peak as a fraction of the nominal R-R interval.
  double first_beat_fraction = 0.5;
};

struct SynthResult {
  LeadTimeMatrix signal;
  RPeakList rpeaks;  // ground truth
};

// Throws InvalidConfig.
void validate(const SynthConfig& cfg);

SynthResult generate(const SynthConfig& cfg);

// Resting morphology with a larger, broader T wave and a faded P wave.
SynthConfig exertion_variant(SynthConfig cfg, double t_gain = 1.6, double t_broadening = 1.3,
                             double p_gain = 0.4);

}  // namespace shiftig

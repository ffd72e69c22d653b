#ifndef SPECSENSE_SIGNAL_HPP_
#define SPECSENSE_SIGNAL_HPP_

#include <complex>
#include <cstdint>
#include <vector>

#include "specsense/rng.hpp"

namespace specsense {

enum class WaveformLabel { PuTone, NoiseOnly, Composite };

struct Waveform {
  std::vector<std::complex<double>> samples;
  double sample_rate_hz = 0.0;
  WaveformLabel label = WaveformLabel::NoiseOnly;
};

// Power is carried as dBm on a normalized scale: 0 dBm is mean-square 1.0.
// Only the PU/noise ratio matters downstream; absolute RF calibration is
// out of scope. -inf disables the source (zero amplitude).
double dbm_to_linear(double dbm);

struct SignalConfig {
  double tone_freq_hz = 1.0e5;
  double sample_rate_hz = 2.4576e9;
  std::size_t num_samples = 4096;
  double pu_power_dbm = 0.0;
  double noise_power_dbm = 0.0;
  std::uint64_t seed = 0;

  // Nyquist and minimum transfer size; throws InvalidConfigError.
  void validate() const;
};

// Constant-envelope complex exponential at tone_freq_hz, amplitude set so
// mean power equals dbm_to_linear(pu_power_dbm).
Waveform generate_pu_tone(const SignalConfig& cfg);

// I.i.d. circularly symmetric complex Gaussian samples with total variance
// dbm_to_linear(noise_power_dbm), split equally between I and Q. The same
// (seed, tag, w1, w2) always yields the same sequence.
Waveform generate_noise(const SignalConfig& cfg, std::uint32_t tag,
                        std::uint32_t w1 = 0, std::uint32_t w2 = 0);
Waveform generate_noise(const SignalConfig& cfg);

// Element-wise sum; lengths and sample rates must match.
Waveform mix(const Waveform& signal, const Waveform& noise);

double mean_power(const Waveform& w);

}  // namespace specsense

#endif  // SPECSENSE_SIGNAL_HPP_

#include "specsense/signal.hpp"

#include <cmath>

#include "specsense/errors.hpp"

namespace specsense {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr std::size_t kMinSamples = 16;  // smallest device transfer
}  // namespace

double dbm_to_linear(double dbm) {
  if (std::isinf(dbm) && dbm < 0.0) return 0.0;
  return std::pow(10.0, dbm / 10.0);
}

void SignalConfig::validate() const {
  if (!(sample_rate_hz > 0.0)) {
    throw InvalidConfigError("sample_rate_hz must be positive");
  }
  if (!(std::fabs(tone_freq_hz) < sample_rate_hz / 2.0)) {
    throw InvalidConfigError("tone_freq_hz violates Nyquist limit");
  }
  if (num_samples < kMinSamples) {
    throw InvalidConfigError("num_samples must be at least 16");
  }
}

Waveform generate_pu_tone(const SignalConfig& cfg) {
  cfg.validate();
  const double amplitude = std::sqrt(dbm_to_linear(cfg.pu_power_dbm));
  const double phase_step = kTwoPi * cfg.tone_freq_hz / cfg.sample_rate_hz;
  Waveform w;
  w.sample_rate_hz = cfg.sample_rate_hz;
  w.label = WaveformLabel::PuTone;
  w.samples.resize(cfg.num_samples);
  for (std::size_t k = 0; k < cfg.num_samples; ++k) {
    const double phase = phase_step * static_cast<double>(k);
    w.samples[k] = {amplitude * std::cos(phase), amplitude * std::sin(phase)};
  }
  return w;
}

Waveform generate_noise(const SignalConfig& cfg, std::uint32_t tag,
                        std::uint32_t w1, std::uint32_t w2) {
  cfg.validate();
  const double variance = dbm_to_linear(cfg.noise_power_dbm);
  RngStream rng(cfg.seed, tag, w1, w2);
  Waveform w;
  w.sample_rate_hz = cfg.sample_rate_hz;
  w.label = WaveformLabel::NoiseOnly;
  w.samples.resize(cfg.num_samples);
  for (auto& s : w.samples) s = rng.complex_normal(variance);
  return w;
}

Waveform generate_noise(const SignalConfig& cfg) {
  return generate_noise(cfg, make_tag(StreamPurpose::Noise), 0, 0);
}

Waveform mix(const Waveform& signal, const Waveform& noise) {
  if (signal.samples.size() != noise.samples.size()) {
    throw InvalidConfigError("mix: waveform lengths differ");
  }
  if (signal.sample_rate_hz != noise.sample_rate_hz) {
    throw InvalidConfigError("mix: sample rates differ");
  }
  Waveform out;
  out.sample_rate_hz = signal.sample_rate_hz;
  out.label = WaveformLabel::Composite;
  out.samples.resize(signal.samples.size());
  for (std::size_t k = 0; k < out.samples.size(); ++k) {
    out.samples[k] = signal.samples[k] + noise.samples[k];
  }
  return out;
}

double mean_power(const Waveform& w) {
  if (w.samples.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& s : w.samples) acc += std::norm(s);
  return acc / static_cast<double>(w.samples.size());
}

}  // namespace specsense

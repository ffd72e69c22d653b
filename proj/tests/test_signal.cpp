#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "specsense/errors.hpp"
#include "specsense/signal.hpp"

using namespace specsense;

namespace {
SignalConfig default_cfg() {
  SignalConfig cfg;
  cfg.seed = 99;
  return cfg;
}
}  // namespace

TEST_CASE("zero-frequency tone is a DC constant") {
  SignalConfig cfg = default_cfg();
  cfg.tone_freq_hz = 0.0;
  cfg.pu_power_dbm = -3.0;
  const Waveform w = generate_pu_tone(cfg);
  const double amplitude = std::sqrt(dbm_to_linear(-3.0));
  for (const auto& s : w.samples) {
    CHECK(s.real() == doctest::Approx(amplitude).epsilon(1e-15));
    CHECK(s.imag() == 0.0);
  }
}

TEST_CASE("tone phase arithmetic at the acquisition defaults") {
  SignalConfig cfg = default_cfg();  // 100 kHz @ 2.4576 GSPS, 4096 samples
  cfg.pu_power_dbm = 0.0;
  const Waveform w = generate_pu_tone(cfg);
  REQUIRE(w.samples.size() == 4096);
  CHECK(w.samples[0].real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w.samples[0].imag() == 0.0);

  // Closed-form phase against an independent phasor-recurrence loop.
  const double step = 2.0 * M_PI * 1.0e5 / 2.4576e9;
  std::complex<double> rot(std::cos(step), std::sin(step));
  std::complex<double> z(1.0, 0.0);
  for (std::size_t k = 0; k < w.samples.size(); ++k) {
    CHECK(std::abs(w.samples[k] - z) < 1e-9);
    z *= rot;
  }

  // Full rotation every 24576 samples.
  SignalConfig long_cfg = cfg;
  long_cfg.num_samples = 24576 + 8;
  const Waveform lw = generate_pu_tone(long_cfg);
  CHECK(std::abs(lw.samples[24576] - lw.samples[0]) < 1e-9);

  // Constant envelope.
  for (const auto& s : w.samples) {
    CHECK(std::abs(s) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("dBm powers set amplitude ratios") {
  SignalConfig a = default_cfg();
  a.pu_power_dbm = -10.0;
  SignalConfig b = default_cfg();
  b.pu_power_dbm = 0.0;
  const double ratio = std::abs(generate_pu_tone(a).samples[0]) /
                       std::abs(generate_pu_tone(b).samples[0]);
  CHECK(ratio == doctest::Approx(std::pow(10.0, -10.0 / 20.0)).epsilon(1e-12));
  CHECK(ratio == doctest::Approx(0.31622776601).epsilon(1e-9));
}

TEST_CASE("noise is deterministic per seed and stream") {
  SignalConfig cfg = default_cfg();
  const Waveform a = generate_noise(cfg);
  const Waveform b = generate_noise(cfg);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i] == b.samples[i]);
  }
  SignalConfig other = cfg;
  other.seed = cfg.seed + 1;
  CHECK(generate_noise(other).samples[0] != a.samples[0]);
}

TEST_CASE("noise power matches the configured level") {
  SignalConfig cfg = default_cfg();
  cfg.num_samples = 1000000;
  cfg.noise_power_dbm = 0.0;
  const Waveform w = generate_noise(cfg);
  CHECK(mean_power(w) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("noise is circularly symmetric") {
  SignalConfig cfg = default_cfg();
  cfg.num_samples = 1000000;
  const Waveform w = generate_noise(cfg);
  double sum_i = 0.0, sum_q = 0.0, sum_iq = 0.0, sum_ii = 0.0, sum_qq = 0.0;
  for (const auto& s : w.samples) {
    sum_i += s.real();
    sum_q += s.imag();
    sum_iq += s.real() * s.imag();
    sum_ii += s.real() * s.real();
    sum_qq += s.imag() * s.imag();
  }
  const double n = static_cast<double>(w.samples.size());
  const double cov = sum_iq / n - (sum_i / n) * (sum_q / n);
  const double var_i = sum_ii / n - (sum_i / n) * (sum_i / n);
  const double var_q = sum_qq / n - (sum_q / n) * (sum_q / n);
  CHECK(std::fabs(cov / std::sqrt(var_i * var_q)) < 0.01);
  // I and Q split the total variance equally.
  CHECK(var_i == doctest::Approx(0.5).epsilon(0.02));
  CHECK(var_q == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("mix identities") {
  SignalConfig cfg = default_cfg();
  cfg.num_samples = 64;
  const Waveform tone = generate_pu_tone(cfg);
  Waveform zero = tone;
  for (auto& s : zero.samples) s = 0.0;

  const Waveform sum = mix(tone, zero);
  CHECK(sum.label == WaveformLabel::Composite);
  for (std::size_t i = 0; i < sum.samples.size(); ++i) {
    CHECK(sum.samples[i] == tone.samples[i]);
  }
  const Waveform noise = generate_noise(cfg);
  const Waveform sum2 = mix(zero, noise);
  for (std::size_t i = 0; i < sum2.samples.size(); ++i) {
    CHECK(sum2.samples[i] == noise.samples[i]);
  }
}

TEST_CASE("independent tone and noise powers add") {
  SignalConfig cfg = default_cfg();
  cfg.num_samples = 1000000;
  cfg.pu_power_dbm = 3.0;
  cfg.noise_power_dbm = -2.0;
  const Waveform tone = generate_pu_tone(cfg);
  const Waveform noise = generate_noise(cfg);
  const double expected = dbm_to_linear(3.0) + dbm_to_linear(-2.0);
  CHECK(mean_power(mix(tone, noise)) == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("snr control: measured power ratio tracks the dB difference") {
  SignalConfig cfg = default_cfg();
  cfg.num_samples = 200000;
  for (double snr_db : {-10.0, 0.0, 7.0}) {
    cfg.pu_power_dbm = snr_db;
    cfg.noise_power_dbm = 0.0;
    const double ratio =
        mean_power(generate_pu_tone(cfg)) / mean_power(generate_noise(cfg));
    CHECK(ratio == doctest::Approx(std::pow(10.0, snr_db / 10.0)).epsilon(0.02));
  }
}

TEST_CASE("minus-infinity dBm disables a source") {
  CHECK(dbm_to_linear(-std::numeric_limits<double>::infinity()) == 0.0);
  SignalConfig cfg = default_cfg();
  cfg.pu_power_dbm = -std::numeric_limits<double>::infinity();
  const Waveform w = generate_pu_tone(cfg);
  for (const auto& s : w.samples) CHECK(std::abs(s) == 0.0);
}

TEST_CASE("config validation errors") {
  SignalConfig nyquist = default_cfg();
  nyquist.tone_freq_hz = 2.0e9;  // >= Fs/2
  CHECK_THROWS_AS(generate_pu_tone(nyquist), InvalidConfigError);

  SignalConfig tiny = default_cfg();
  tiny.num_samples = 8;
  CHECK_THROWS_AS(generate_noise(tiny), InvalidConfigError);

  SignalConfig a = default_cfg();
  a.num_samples = 32;
  SignalConfig b = default_cfg();
  b.num_samples = 64;
  CHECK_THROWS_AS(mix(generate_noise(a), generate_noise(b)),
                  InvalidConfigError);
}

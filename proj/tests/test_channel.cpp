#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "specsense/channel.hpp"
#include "specsense/errors.hpp"
#include "specsense/signal.hpp"

using namespace specsense;

namespace {

Waveform impulse(std::size_t n, double fs) {
  Waveform w;
  w.sample_rate_hz = fs;
  w.label = WaveformLabel::PuTone;
  w.samples.assign(n, {0.0, 0.0});
  w.samples[0] = {1.0, 0.0};
  return w;
}

Waveform random_waveform(std::size_t n, double fs, std::uint64_t seed) {
  SignalConfig cfg;
  cfg.num_samples = n;
  cfg.sample_rate_hz = fs;
  cfg.seed = seed;
  return generate_noise(cfg);
}

// Direct dense FIR convolution, the oracle for apply_channel.
std::vector<std::complex<double>> convolve_truncated(
    const std::vector<std::complex<double>>& x,
    const std::vector<std::complex<double>>& h) {
  std::vector<std::complex<double>> y(x.size(), {0.0, 0.0});
  for (std::size_t k = 0; k < x.size(); ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t m = 0; m < h.size() && m <= k; ++m) {
      acc += h[m] * x[k - m];
    }
    y[k] = acc;
  }
  return y;
}

constexpr double kFs = 2.4576e9;

}  // namespace

TEST_CASE("EPA profile matches the 3GPP tapped-delay-line") {
  const ChannelProfile epa = epa_profile();
  CHECK(epa.taps.size() == 7);
  CHECK(epa.taps.back().delay_s == doctest::Approx(410e-9).epsilon(1e-12));
  CHECK(epa.taps.front().delay_s == 0.0);
  double total = 0.0;
  for (double p : epa.linear_powers) total += p;
  CHECK(std::fabs(total - 1.0) <= 1e-12);
  CHECK(epa.taps[1].power_db == doctest::Approx(-1.0));
  CHECK(epa.taps[5].power_db == doctest::Approx(-17.2));
}

TEST_CASE("single zero-delay unit tap static channel is the identity") {
  const ChannelProfile flat =
      ChannelProfile::make("flat", {{0.0, 0.0}}, FadingModel::Static);
  const Waveform x = random_waveform(512, kFs, 1);
  const MultiRxOutput out = apply_channel(x, flat, 2, 0);
  REQUIRE(out.per_rx.size() == 2);
  for (const auto& y : out.per_rx) {
    REQUIRE(y.samples.size() == x.samples.size());
    for (std::size_t k = 0; k < x.samples.size(); ++k) {
      CHECK(y.samples[k] == x.samples[k]);
    }
  }
}

TEST_CASE("EPA tap delays round to the documented sample offsets") {
  // round(delay * 2.4576 GSPS): 30ns -> 74, then 172, 221, 270, 467, 1008.
  const std::vector<std::size_t> expected = {0, 74, 172, 221, 270, 467, 1008};
  const ChannelProfile epa = epa_profile(FadingModel::Static);
  const Waveform x = impulse(1100, kFs);
  const MultiRxOutput out = apply_channel(x, epa, 1, 0);
  const auto& y = out.per_rx[0].samples;
  std::vector<std::size_t> nonzero;
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (std::abs(y[k]) > 0.0) nonzero.push_back(k);
  }
  CHECK(nonzero == expected);
  for (std::size_t t = 0; t < expected.size(); ++t) {
    CHECK(std::abs(y[expected[t]]) ==
          doctest::Approx(std::sqrt(epa.linear_powers[t])).epsilon(1e-12));
  }
}

TEST_CASE("matches brute-force convolution, static gains") {
  const ChannelProfile epa = epa_profile(FadingModel::Static);
  const Waveform x = random_waveform(1024, kFs, 2);
  std::vector<std::complex<double>> h(1009, {0.0, 0.0});
  const std::vector<std::size_t> offsets = {0, 74, 172, 221, 270, 467, 1008};
  for (std::size_t t = 0; t < offsets.size(); ++t) {
    h[offsets[t]] += std::sqrt(epa.linear_powers[t]);
  }
  const auto oracle = convolve_truncated(x.samples, h);
  const auto& y = apply_channel(x, epa, 1, 0).per_rx[0].samples;
  for (std::size_t k = 0; k < y.size(); ++k) {
    CHECK(std::abs(y[k] - oracle[k]) <= 1e-10);
  }
}

TEST_CASE("matches brute-force convolution, Rayleigh gains") {
  const ChannelProfile epa = epa_profile(FadingModel::RayleighBlock, 77);
  const std::vector<std::size_t> offsets = {0, 74, 172, 221, 270, 467, 1008};
  for (std::int64_t snapshot : {0, 5}) {
    // The impulse response exposes this snapshot's tap gains.
    const auto resp =
        apply_channel(impulse(1024, kFs), epa, 3, snapshot).per_rx[2].samples;
    std::vector<std::complex<double>> h(1009, {0.0, 0.0});
    for (std::size_t o : offsets) {
      if (o < h.size() && o < resp.size()) h[o] = resp[o];
    }
    const Waveform x = random_waveform(1024, kFs, 3);
    const auto oracle = convolve_truncated(x.samples, h);
    const auto& y = apply_channel(x, epa, 3, snapshot).per_rx[2].samples;
    for (std::size_t k = 0; k < y.size(); ++k) {
      CHECK(std::abs(y[k] - oracle[k]) <= 1e-10);
    }
  }
}

TEST_CASE("channel is linear for a fixed snapshot") {
  const ChannelProfile epa = epa_profile(FadingModel::RayleighBlock, 5);
  const Waveform x = random_waveform(700, kFs, 4);
  const Waveform y = random_waveform(700, kFs, 6);
  const std::complex<double> a(1.7, -0.3), b(-0.4, 2.1);
  Waveform combo = x;
  for (std::size_t k = 0; k < combo.samples.size(); ++k) {
    combo.samples[k] = a * x.samples[k] + b * y.samples[k];
  }
  const auto& out_combo = apply_channel(combo, epa, 2, 9).per_rx[1].samples;
  const auto& out_x = apply_channel(x, epa, 2, 9).per_rx[1].samples;
  const auto& out_y = apply_channel(y, epa, 2, 9).per_rx[1].samples;
  double scale = 0.0;
  for (const auto& s : out_combo) scale = std::max(scale, std::abs(s));
  for (std::size_t k = 0; k < out_combo.size(); ++k) {
    const std::complex<double> lin = a * out_x[k] + b * out_y[k];
    CHECK(std::abs(out_combo[k] - lin) <= 1e-10 * scale);
  }
}

TEST_CASE("Rayleigh tap gains are zero-mean with the tap's power") {
  const ChannelProfile epa = epa_profile(FadingModel::RayleighBlock, 11);
  const int snapshots = 10000;
  const Waveform delta = impulse(1100, kFs);
  const std::vector<std::size_t> offsets = {0, 74, 172, 221, 270, 467, 1008};
  std::vector<std::complex<double>> mean(7, {0.0, 0.0});
  std::vector<double> var(7, 0.0);
  for (int s = 0; s < snapshots; ++s) {
    const auto resp = apply_channel(delta, epa, 1, s).per_rx[0].samples;
    for (std::size_t t = 0; t < offsets.size(); ++t) {
      mean[t] += resp[offsets[t]];
      var[t] += std::norm(resp[offsets[t]]);
    }
  }
  for (std::size_t t = 0; t < offsets.size(); ++t) {
    mean[t] /= static_cast<double>(snapshots);
    var[t] /= static_cast<double>(snapshots);
    CHECK(std::abs(mean[t]) < 3.0 * std::sqrt(epa.linear_powers[t] / snapshots) + 1e-12);
    CHECK(var[t] == doctest::Approx(epa.linear_powers[t]).epsilon(0.05));
  }
}

TEST_CASE("unit average channel gain across snapshots") {
  const ChannelProfile epa = epa_profile(FadingModel::RayleighBlock, 13);
  SignalConfig cfg;
  cfg.num_samples = 2048;
  cfg.sample_rate_hz = kFs;
  cfg.pu_power_dbm = 0.0;
  const Waveform tone = generate_pu_tone(cfg);
  const int snapshots = 10000;
  double acc = 0.0;
  for (int s = 0; s < snapshots; ++s) {
    const auto& y = apply_channel(tone, epa, 1, s).per_rx[0].samples;
    // steady state only: before the longest delay (1008 samples) the FIR
    // is still filling and the output is biased low
    double p = 0.0;
    for (std::size_t k = 1008; k < y.size(); ++k) p += std::norm(y[k]);
    acc += p / static_cast<double>(y.size() - 1008);
  }
  CHECK(acc / snapshots == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("per-receiver and per-snapshot gains are independent draws") {
  const ChannelProfile epa = epa_profile(FadingModel::RayleighBlock, 17);
  const Waveform delta = impulse(64, kFs);
  const auto a = apply_channel(delta, epa, 2, 0);
  const auto b = apply_channel(delta, epa, 2, 1);
  CHECK(a.per_rx[0].samples[0] != a.per_rx[1].samples[0]);
  CHECK(a.per_rx[0].samples[0] != b.per_rx[0].samples[0]);
  // Same key -> same gain.
  const auto a2 = apply_channel(delta, epa, 2, 0);
  CHECK(a.per_rx[0].samples[0] == a2.per_rx[0].samples[0]);
}

TEST_CASE("noise_floor_inject") {
  MultiRxOutput out;
  out.per_rx.resize(2);
  for (auto& w : out.per_rx) {
    w.sample_rate_hz = kFs;
    w.samples.assign(1000, {0.0, 0.0});
  }

  SUBCASE("minus infinity disables injection") {
    noise_floor_inject(out, -std::numeric_limits<double>::infinity(), 1, {0, 1});
    for (const auto& w : out.per_rx) {
      for (const auto& s : w.samples) CHECK(s == std::complex<double>(0.0, 0.0));
    }
  }

  SUBCASE("different stream ids differ, same id reproduces") {
    noise_floor_inject(out, 0.0, 1, {0, 1});
    CHECK(out.per_rx[0].samples[0] != out.per_rx[1].samples[0]);
    MultiRxOutput again;
    again.per_rx.resize(2);
    for (auto& w : again.per_rx) {
      w.sample_rate_hz = kFs;
      w.samples.assign(1000, {0.0, 0.0});
    }
    noise_floor_inject(again, 0.0, 1, {0, 1});
    CHECK(again.per_rx[0].samples[0] == out.per_rx[0].samples[0]);
  }

  SUBCASE("injected-only capture has the configured power") {
    MultiRxOutput big;
    big.per_rx.resize(1);
    big.per_rx[0].sample_rate_hz = kFs;
    big.per_rx[0].samples.assign(1000000, {0.0, 0.0});
    noise_floor_inject(big, -3.0, 2, {42});
    CHECK(mean_power(big.per_rx[0]) ==
          doctest::Approx(dbm_to_linear(-3.0)).epsilon(0.01));
  }

  SUBCASE("stream id count must match receivers") {
    CHECK_THROWS_AS(noise_floor_inject(out, 0.0, 1, {0}), InvalidConfigError);
  }
}

TEST_CASE("profile JSON round trip and validation") {
  const ChannelProfile epa = epa_profile();
  const ChannelProfile back = profile_from_json(profile_to_json(epa), epa.seed);
  CHECK(back.name == epa.name);
  CHECK(back.fading == epa.fading);
  REQUIRE(back.taps.size() == epa.taps.size());
  for (std::size_t t = 0; t < epa.taps.size(); ++t) {
    CHECK(back.taps[t].delay_s == doctest::Approx(epa.taps[t].delay_s).epsilon(1e-12));
    CHECK(back.taps[t].power_db == epa.taps[t].power_db);
    CHECK(back.linear_powers[t] ==
          doctest::Approx(epa.linear_powers[t]).epsilon(1e-12));
  }

  const std::string custom = R"({"name":"two-tap",
    "taps":[{"delay_ns":0,"power_db":0},{"delay_ns":100,"power_db":-3}],
    "fading":"static"})";
  const ChannelProfile p = profile_from_json(custom);
  CHECK(p.taps.size() == 2);
  CHECK(p.fading == FadingModel::Static);

  CHECK_THROWS_AS(profile_from_json("not json"), InvalidConfigError);
  CHECK_THROWS_AS(profile_from_json(R"({"name":"x"})"), InvalidConfigError);
  CHECK_THROWS_AS(
      profile_from_json(
          R"({"taps":[{"delay_ns":10,"power_db":0}],"fading":"static"})"),
      InvalidConfigError);  // first delay nonzero
  CHECK_THROWS_AS(
      profile_from_json(
          R"({"taps":[{"delay_ns":0,"power_db":0},{"delay_ns":0,"power_db":0}]})"),
      InvalidConfigError);  // not strictly increasing
}

TEST_CASE("apply_channel argument validation") {
  const ChannelProfile epa = epa_profile();
  const Waveform x = random_waveform(64, kFs, 9);
  CHECK_THROWS_AS(apply_channel(x, epa, 0, 0), InvalidConfigError);
  Waveform empty;
  empty.sample_rate_hz = kFs;
  CHECK_THROWS_AS(apply_channel(empty, epa, 1, 0), InvalidConfigError);
}

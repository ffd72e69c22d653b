#include "specsense/channel.hpp"

#include <cmath>
#include <utility>

#include <json.hpp>

#include "specsense/errors.hpp"

namespace specsense {

namespace {

using nlohmann::json;

std::string fading_to_string(FadingModel fading) {
  return fading == FadingModel::Static ? "static" : "rayleigh_block";
}

FadingModel fading_from_string(const std::string& s) {
  if (s == "static") return FadingModel::Static;
  if (s == "rayleigh_block") return FadingModel::RayleighBlock;
  throw InvalidConfigError("unknown fading model: " + s);
}

}  // namespace

ChannelProfile ChannelProfile::make(std::string name,
                                    std::vector<ChannelTap> taps,
                                    FadingModel fading, std::uint64_t seed) {
  if (taps.empty()) throw InvalidConfigError("channel profile needs taps");
  if (taps.front().delay_s != 0.0) {
    throw InvalidConfigError("first tap delay must be 0");
  }
  for (std::size_t i = 1; i < taps.size(); ++i) {
    if (!(taps[i].delay_s > taps[i - 1].delay_s)) {
      throw InvalidConfigError("tap delays must be strictly increasing");
    }
  }
  ChannelProfile p;
  p.name = std::move(name);
  p.taps = std::move(taps);
  p.fading = fading;
  p.seed = seed;
  double total = 0.0;
  p.linear_powers.reserve(p.taps.size());
  for (const auto& tap : p.taps) {
    const double lin = std::pow(10.0, tap.power_db / 10.0);
    p.linear_powers.push_back(lin);
    total += lin;
  }
  for (auto& lp : p.linear_powers) lp /= total;
  return p;
}

ChannelProfile epa_profile(FadingModel fading, std::uint64_t seed) {
  return ChannelProfile::make(
      "EPA",
      {{0e-9, 0.0},
       {30e-9, -1.0},
       {70e-9, -2.0},
       {90e-9, -3.0},
       {110e-9, -8.0},
       {190e-9, -17.2},
       {410e-9, -20.8}},
      fading, seed);
}

ChannelProfile profile_from_json(const std::string& text, std::uint64_t seed) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidConfigError(std::string("channel profile JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("taps")) {
    throw InvalidConfigError("channel profile JSON must have a taps array");
  }
  std::vector<ChannelTap> taps;
  for (const auto& t : doc.at("taps")) {
    taps.push_back(
        {t.at("delay_ns").get<double>() * 1e-9, t.at("power_db").get<double>()});
  }
  const std::string name = doc.value("name", "custom");
  const FadingModel fading =
      fading_from_string(doc.value("fading", "rayleigh_block"));
  return ChannelProfile::make(name, std::move(taps), fading, seed);
}

std::string profile_to_json(const ChannelProfile& profile) {
  json doc;
  doc["name"] = profile.name;
  doc["fading"] = fading_to_string(profile.fading);
  json taps = json::array();
  for (const auto& tap : profile.taps) {
    taps.push_back({{"delay_ns", tap.delay_s * 1e9}, {"power_db", tap.power_db}});
  }
  doc["taps"] = std::move(taps);
  return doc.dump(2);
}

MultiRxOutput apply_channel(const Waveform& input,
                            const ChannelProfile& profile, int num_rx,
                            std::int64_t snapshot) {
  if (num_rx < 1) throw InvalidConfigError("num_rx must be >= 1");
  if (input.samples.empty()) throw InvalidConfigError("empty channel input");

  const std::size_t n = input.samples.size();
  std::vector<std::size_t> offsets(profile.taps.size());
  for (std::size_t t = 0; t < profile.taps.size(); ++t) {
    offsets[t] = static_cast<std::size_t>(
        std::llround(profile.taps[t].delay_s * input.sample_rate_hz));
  }

  MultiRxOutput out;
  out.realization_id = snapshot;
  out.per_rx.resize(static_cast<std::size_t>(num_rx));
  const auto snap32 = static_cast<std::uint32_t>(snapshot);
  for (int rx = 0; rx < num_rx; ++rx) {
    Waveform& y = out.per_rx[static_cast<std::size_t>(rx)];
    y.sample_rate_hz = input.sample_rate_hz;
    y.label = input.label;
    y.samples.assign(n, {0.0, 0.0});
    for (std::size_t t = 0; t < profile.taps.size(); ++t) {
      std::complex<double> gain;
      if (profile.fading == FadingModel::Static) {
        gain = std::sqrt(profile.linear_powers[t]);
      } else {
        RngStream rng(profile.seed,
                      make_tag(StreamPurpose::ChannelGain,
                               static_cast<std::uint32_t>(t)),
                      snap32, static_cast<std::uint32_t>(rx));
        gain = rng.complex_normal(profile.linear_powers[t]);
      }
      const std::size_t d = offsets[t];
      if (d >= n) continue;
      for (std::size_t k = d; k < n; ++k) {
        y.samples[k] += gain * input.samples[k - d];
      }
    }
  }
  return out;
}

void noise_floor_inject(MultiRxOutput& out, double noise_power_dbm,
                        std::uint64_t seed,
                        const std::vector<std::uint64_t>& stream_ids) {
  if (std::isinf(noise_power_dbm) && noise_power_dbm < 0.0) return;
  if (stream_ids.size() != out.per_rx.size()) {
    throw InvalidConfigError("noise_floor_inject: one stream id per receiver");
  }
  const double variance = dbm_to_linear(noise_power_dbm);
  for (std::size_t rx = 0; rx < out.per_rx.size(); ++rx) {
    RngStream rng(seed, make_tag(StreamPurpose::Noise),
                  static_cast<std::uint32_t>(stream_ids[rx] >> 32),
                  static_cast<std::uint32_t>(stream_ids[rx]));
    for (auto& s : out.per_rx[rx].samples) s += rng.complex_normal(variance);
  }
}

}  // namespace specsense

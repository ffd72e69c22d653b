#include "specsense/capture.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "specsense/errors.hpp"

namespace specsense {

namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "capture payload I/O assumes a little-endian host");

std::string payload_path(const std::string& stem) { return stem + ".iq"; }
std::string sidecar_path(const std::string& stem) { return stem + ".json"; }

}  // namespace

void IqCapture::validate() const {
  if (meta.format_version != 1) {
    throw InvalidConfigError("capture format_version must be 1");
  }
  if (meta.num_channels < 1 ||
      channels.size() != static_cast<std::size_t>(meta.num_channels)) {
    throw InvalidConfigError("capture channel count mismatch");
  }
  for (const auto& ch : channels) {
    if (ch.size() != meta.num_samples) {
      throw InvalidConfigError("capture sample count mismatch");
    }
  }
  if (!(meta.sample_rate_hz > 0.0)) {
    throw InvalidConfigError("capture sample rate must be positive");
  }
}

Waveform IqCapture::channel_as_waveform(int ch) const {
  if (ch < 0 || ch >= meta.num_channels) {
    throw InvalidConfigError("capture channel index out of range");
  }
  Waveform w;
  w.sample_rate_hz = meta.sample_rate_hz;
  w.label = WaveformLabel::Composite;
  const auto& src = channels[static_cast<std::size_t>(ch)];
  w.samples.reserve(src.size());
  for (const auto& s : src) {
    w.samples.emplace_back(static_cast<double>(s.real()),
                           static_cast<double>(s.imag()));
  }
  return w;
}

IqCapture IqCapture::from_waveforms(const std::vector<Waveform>& rx,
                                    double center_freq_hz,
                                    const std::string& label,
                                    std::uint64_t seed) {
  if (rx.empty()) throw InvalidConfigError("capture needs at least one channel");
  IqCapture cap;
  cap.meta.format_version = 1;
  cap.meta.sample_rate_hz = rx.front().sample_rate_hz;
  cap.meta.center_freq_hz = center_freq_hz;
  cap.meta.num_channels = static_cast<int>(rx.size());
  cap.meta.num_samples = rx.front().samples.size();
  cap.meta.label = label;
  cap.meta.seed = seed;
  cap.channels.reserve(rx.size());
  for (const auto& w : rx) {
    if (w.samples.size() != cap.meta.num_samples ||
        w.sample_rate_hz != cap.meta.sample_rate_hz) {
      throw InvalidConfigError("capture channels must share shape and rate");
    }
    std::vector<std::complex<float>> ch;
    ch.reserve(w.samples.size());
    for (const auto& s : w.samples) {
      ch.emplace_back(static_cast<float>(s.real()),
                      static_cast<float>(s.imag()));
    }
    cap.channels.push_back(std::move(ch));
  }
  cap.validate();
  return cap;
}

void write_capture(const std::string& stem, const IqCapture& capture) {
  capture.validate();

  json meta;
  meta["format_version"] = capture.meta.format_version;
  meta["sample_rate_hz"] = capture.meta.sample_rate_hz;
  meta["center_freq_hz"] = capture.meta.center_freq_hz;
  meta["num_channels"] = capture.meta.num_channels;
  meta["num_samples"] = capture.meta.num_samples;
  meta["label"] = capture.meta.label;
  meta["seed"] = capture.meta.seed;

  std::ofstream side(sidecar_path(stem), std::ios::binary | std::ios::trunc);
  if (!side) throw IoError("cannot write " + sidecar_path(stem));
  side << meta.dump(2) << '\n';
  if (!side.flush()) throw IoError("short write to " + sidecar_path(stem));

  std::ofstream payload(payload_path(stem), std::ios::binary | std::ios::trunc);
  if (!payload) throw IoError("cannot write " + payload_path(stem));
  for (const auto& ch : capture.channels) {
    payload.write(reinterpret_cast<const char*>(ch.data()),
                  static_cast<std::streamsize>(ch.size() * sizeof(ch[0])));
  }
  if (!payload.flush()) throw IoError("short write to " + payload_path(stem));
}

IqCapture read_capture(const std::string& stem) {
  std::ifstream side(sidecar_path(stem), std::ios::binary);
  if (!side) throw IoError("missing capture sidecar " + sidecar_path(stem));
  json meta;
  try {
    side >> meta;
  } catch (const json::exception& e) {
    throw IoError("bad capture sidecar: " + std::string(e.what()));
  }

  IqCapture cap;
  try {
    cap.meta.format_version = meta.at("format_version").get<int>();
    cap.meta.sample_rate_hz = meta.at("sample_rate_hz").get<double>();
    cap.meta.center_freq_hz = meta.at("center_freq_hz").get<double>();
    cap.meta.num_channels = meta.at("num_channels").get<int>();
    cap.meta.num_samples = meta.at("num_samples").get<std::uint64_t>();
    cap.meta.label = meta.at("label").get<std::string>();
    cap.meta.seed = meta.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw IoError("capture sidecar missing fields: " + std::string(e.what()));
  }
  if (cap.meta.format_version != 1) {
    throw IoError("unsupported capture format_version " +
                  std::to_string(cap.meta.format_version));
  }
  if (cap.meta.num_channels < 1) {
    throw IoError("capture sidecar declares no channels");
  }

  std::ifstream payload(payload_path(stem), std::ios::binary | std::ios::ate);
  if (!payload) throw IoError("missing capture payload " + payload_path(stem));
  const auto actual = static_cast<std::uint64_t>(payload.tellg());
  const std::uint64_t expected = static_cast<std::uint64_t>(cap.meta.num_channels) *
                                 cap.meta.num_samples * 2 * sizeof(float);
  if (actual != expected) {
    throw IoError("capture payload size mismatch: expected " +
                  std::to_string(expected) + " bytes, found " +
                  std::to_string(actual));
  }
  payload.seekg(0);
  cap.channels.resize(static_cast<std::size_t>(cap.meta.num_channels));
  for (auto& ch : cap.channels) {
    ch.resize(cap.meta.num_samples);
    payload.read(reinterpret_cast<char*>(ch.data()),
                 static_cast<std::streamsize>(ch.size() * sizeof(ch[0])));
    if (!payload) throw IoError("short read from " + payload_path(stem));
  }
  cap.validate();
  return cap;
}

}  // namespace specsense

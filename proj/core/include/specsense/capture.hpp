#ifndef SPECSENSE_CAPTURE_HPP_
#define SPECSENSE_CAPTURE_HPP_

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "specsense/signal.hpp"

namespace specsense {

// On-disk capture: <stem>.json metadata sidecar plus <stem>.iq payload.
// The payload is little-endian float32, I/Q interleaved per channel,
// channels concatenated, so it stays memory-mappable and parseable with
// zero dependencies.
struct CaptureMeta {
  int format_version = 1;
  double sample_rate_hz = 0.0;
  double center_freq_hz = 0.0;
  int num_channels = 0;
  std::uint64_t num_samples = 0;
  std::string label;
  std::uint64_t seed = 0;
};

struct IqCapture {
  CaptureMeta meta;
  std::vector<std::vector<std::complex<float>>> channels;

  void validate() const;  // shape must match the metadata
  Waveform channel_as_waveform(int ch) const;
  static IqCapture from_waveforms(const std::vector<Waveform>& rx,
                                  double center_freq_hz,
                                  const std::string& label,
                                  std::uint64_t seed);
};

void write_capture(const std::string& stem, const IqCapture& capture);
IqCapture read_capture(const std::string& stem);

}  // namespace specsense

#endif  // SPECSENSE_CAPTURE_HPP_

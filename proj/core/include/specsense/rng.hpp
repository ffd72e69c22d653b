#ifndef SPECSENSE_RNG_HPP_
#define SPECSENSE_RNG_HPP_

#include <array>
#include <complex>
#include <cstdint>

namespace specsense {

// Counter-based random streams (Philox 4x32-10). A stream is addressed by
// (seed, tag, w1, w2); draws inside a stream consume counter blocks
// sequentially, so any (trial, receiver, tap, ...) tuple can be mapped to
// its own stream and evaluated in any order, on any number of threads,
// with identical results.
//
// Salmon et al., "Parallel random numbers: as easy as 1, 2, 3", SC 2011.

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Stream tags. The tag word carries the purpose in its top byte so streams
// used for different jobs can never collide even with equal (w1, w2).
enum class StreamPurpose : std::uint32_t {
  General = 0,
  Noise = 1,
  ChannelGain = 2,
  CalibrationNoise = 3,
  ValidationNoise = 4,
  GofCalibration = 5,
  Bootstrap = 6,
  Synthetic = 7,
};

constexpr std::uint32_t make_tag(StreamPurpose purpose, std::uint32_t aux = 0) {
  return (static_cast<std::uint32_t>(purpose) << 24) | (aux & 0x00ffffffu);
}

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint32_t tag, std::uint32_t w1 = 0,
            std::uint32_t w2 = 0)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        prefix_{tag, w1, w2} {}

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // [0, 1), 53-bit resolution.
  double uniform();
  // (0, 1); safe as a log() argument.
  double uniform_pos();
  // Standard normal via Box-Muller (two uniforms per draw, no state).
  double normal();
  // Circularly symmetric complex Gaussian with E|z|^2 = variance.
  std::complex<double> complex_normal(double variance);
  // Marsaglia-Tsang for shape >= 1, boosted below 1.
  double gamma(double shape, double scale);
  double exponential(double rate);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 3> prefix_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
};

}  // namespace specsense

#endif  // SPECSENSE_RNG_HPP_

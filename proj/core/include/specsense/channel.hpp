#ifndef SPECSENSE_CHANNEL_HPP_
#define SPECSENSE_CHANNEL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "specsense/signal.hpp"

namespace specsense {

enum class FadingModel { Static, RayleighBlock };

struct ChannelTap {
  double delay_s = 0.0;
  double power_db = 0.0;
};

// Tapped-delay-line profile. Linear tap powers are normalized to sum to 1
// at construction (unit average channel gain).
struct ChannelProfile {
  std::string name;
  std::vector<ChannelTap> taps;
  FadingModel fading = FadingModel::RayleighBlock;
  std::uint64_t seed = 0;
  std::vector<double> linear_powers;  // normalized

  static ChannelProfile make(std::string name, std::vector<ChannelTap> taps,
                             FadingModel fading, std::uint64_t seed = 0);
};

// 3GPP TS 36.101 Extended Pedestrian A power-delay profile (7 taps).
ChannelProfile epa_profile(FadingModel fading = FadingModel::RayleighBlock,
                           std::uint64_t seed = 0);

// JSON document: {"name":..., "taps":[{"delay_ns":..,"power_db":..}, ...],
// "fading":"static"|"rayleigh_block"}.
ChannelProfile profile_from_json(const std::string& text,
                                 std::uint64_t seed = 0);
std::string profile_to_json(const ChannelProfile& profile);

struct MultiRxOutput {
  std::vector<Waveform> per_rx;
  std::int64_t realization_id = 0;
};

// Passes the input through the profile once per receiver. Tap delays are
// rounded to the nearest sample at the input rate. Gains are sqrt(power)
// for Static and CN(0, power) drawn per (seed, snapshot, rx, tap) for
// RayleighBlock; block fading holds gains constant over the capture.
MultiRxOutput apply_channel(const Waveform& input,
                            const ChannelProfile& profile, int num_rx,
                            std::int64_t snapshot);

// Adds independent complex Gaussian noise per receiver, one stream per
// entry of stream_ids (deterministic). -inf disables injection.
void noise_floor_inject(MultiRxOutput& out, double noise_power_dbm,
                        std::uint64_t seed,
                        const std::vector<std::uint64_t>& stream_ids);

}  // namespace specsense

#endif  // SPECSENSE_CHANNEL_HPP_

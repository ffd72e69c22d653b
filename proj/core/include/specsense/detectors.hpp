#ifndef SPECSENSE_DETECTORS_HPP_
#define SPECSENSE_DETECTORS_HPP_

#include <array>
#include <string>

#include "specsense/eig.hpp"

namespace specsense {

enum class StatKind { MME, ME_AM, ME_GM, AM_GM };

inline constexpr std::array<StatKind, 4> kAllStatKinds = {
    StatKind::MME, StatKind::ME_AM, StatKind::ME_GM, StatKind::AM_GM};

std::string stat_kind_name(StatKind kind);           // mme, meam, megm, amgm
StatKind stat_kind_from_name(const std::string& s);

struct TestStatistic {
  StatKind kind;
  double value;
  int spectrum_dim;
};

// All four are scale-invariant eigenvalue ratios, >= 1 for any PSD
// spectrum with lambda_min > 0. Geometric means run in the log domain.
TestStatistic gamma_mme(const EigSpectrum& s);
TestStatistic gamma_me_am(const EigSpectrum& s);
TestStatistic gamma_me_gm(const EigSpectrum& s);
TestStatistic gamma_am_gm(const EigSpectrum& s);

TestStatistic compute_statistic(StatKind kind, const EigSpectrum& s);
std::array<double, 4> all_statistics(const EigSpectrum& s);  // kAllStatKinds order

}  // namespace specsense

#endif  // SPECSENSE_DETECTORS_HPP_

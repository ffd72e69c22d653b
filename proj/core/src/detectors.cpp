#include "specsense/detectors.hpp"

#include <cmath>

#include "specsense/errors.hpp"

namespace specsense {

namespace {

void require_nonempty(const EigSpectrum& s) {
  if (s.values.empty()) throw InvalidConfigError("empty eigenvalue spectrum");
}

double arithmetic_mean(const EigSpectrum& s) {
  double sum = 0.0;
  for (double v : s.values) sum += v;
  return sum / static_cast<double>(s.values.size());
}

// exp(mean(log)) keeps products of up to 64 small eigenvalues away from
// underflow.
double geometric_mean(const EigSpectrum& s) {
  double acc = 0.0;
  for (double v : s.values) {
    if (!(v > 0.0)) {
      throw NumericError("geometric mean needs strictly positive eigenvalues");
    }
    acc += std::log(v);
  }
  return std::exp(acc / static_cast<double>(s.values.size()));
}

}  // namespace

std::string stat_kind_name(StatKind kind) {
  switch (kind) {
    case StatKind::MME: return "mme";
    case StatKind::ME_AM: return "meam";
    case StatKind::ME_GM: return "megm";
    case StatKind::AM_GM: return "amgm";
  }
  return "?";
}

StatKind stat_kind_from_name(const std::string& s) {
  if (s == "mme") return StatKind::MME;
  if (s == "meam" || s == "me_am") return StatKind::ME_AM;
  if (s == "megm" || s == "me_gm") return StatKind::ME_GM;
  if (s == "amgm" || s == "am_gm") return StatKind::AM_GM;
  throw InvalidConfigError("unknown statistic: " + s);
}

TestStatistic gamma_mme(const EigSpectrum& s) {
  require_nonempty(s);
  if (!(s.lambda_min() > 0.0)) {
    throw NumericError("MME undefined: lambda_min <= 0");
  }
  return {StatKind::MME, s.lambda_max() / s.lambda_min(), s.dim()};
}

TestStatistic gamma_me_am(const EigSpectrum& s) {
  require_nonempty(s);
  const double mean = arithmetic_mean(s);
  if (!(mean > 0.0)) throw NumericError("ME-AM undefined: zero-trace spectrum");
  return {StatKind::ME_AM, s.lambda_max() / mean, s.dim()};
}

TestStatistic gamma_me_gm(const EigSpectrum& s) {
  require_nonempty(s);
  return {StatKind::ME_GM, s.lambda_max() / geometric_mean(s), s.dim()};
}

TestStatistic gamma_am_gm(const EigSpectrum& s) {
  require_nonempty(s);
  return {StatKind::AM_GM, arithmetic_mean(s) / geometric_mean(s), s.dim()};
}

TestStatistic compute_statistic(StatKind kind, const EigSpectrum& s) {
  switch (kind) {
    case StatKind::MME: return gamma_mme(s);
    case StatKind::ME_AM: return gamma_me_am(s);
    case StatKind::ME_GM: return gamma_me_gm(s);
    case StatKind::AM_GM: return gamma_am_gm(s);
  }
  throw InvalidConfigError("unknown statistic kind");
}

std::array<double, 4> all_statistics(const EigSpectrum& s) {
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < kAllStatKinds.size(); ++i) {
    out[i] = compute_statistic(kAllStatKinds[i], s).value;
  }
  return out;
}

}  // namespace specsense

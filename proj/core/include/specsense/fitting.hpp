#ifndef SPECSENSE_FITTING_HPP_
#define SPECSENSE_FITTING_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "specsense/gof.hpp"

namespace specsense {

enum class Family { Lognormal, ChiSquare, Gamma, Exponential };

inline constexpr std::array<Family, 4> kAllFamilies = {
    Family::Lognormal, Family::ChiSquare, Family::Gamma, Family::Exponential};

std::string family_name(Family f);
Family family_from_name(const std::string& s);

struct FitResult {
  Family family;
  std::vector<double> params;  // lognormal: mu,sigma; chi2: k; gamma: shape,scale; exp: rate
  double log_likelihood = 0.0;
  int k = 0;                   // parameter count
  double aic = 0.0;            // 2k - 2 log_likelihood
  double p_value = -1.0;       // < 0 until a bootstrap fills it in
};

// Maximum likelihood on positive samples (n >= 10). Lognormal and
// exponential are closed form; gamma and chi-square run a 1-D Newton
// iteration on the profile likelihood (|step| < 1e-10, <= 200 iterations).
FitResult fit_mle(Family family, std::span<const double> samples);

double aic(const FitResult& fit);

// Lowest AIC wins; ties prefer fewer parameters, then family order.
const FitResult& select_best(std::span<const FitResult> fits);

// Parametric bootstrap: simulate `trials` datasets from the fitted family,
// re-fit each, and return the fraction of simulated statistics >= the
// observed one.
double gof_p_value(const FitResult& fit, std::span<const double> samples,
                   GofTest test, int trials, std::uint64_t seed = 0);

NullCdf fitted_cdf(const FitResult& fit);
double sample_from(const FitResult& fit, RngStream& rng);

// CSV: family,param1,param2,log_likelihood,k,aic,p_value (param2 empty for
// one-parameter families). JSON mirrors the same fields with named params.
std::string fits_to_csv(std::span<const FitResult> fits);
std::string fits_to_json(std::span<const FitResult> fits);

}  // namespace specsense

#endif  // SPECSENSE_FITTING_HPP_

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "specsense/errors.hpp"
#include "specsense/fitting.hpp"
#include "specsense/rng.hpp"

using namespace specsense;

namespace {

std::vector<double> lognormal_draws(std::size_t n, double mu, double sigma,
                                    std::uint64_t seed) {
  RngStream rng(seed, make_tag(StreamPurpose::Synthetic), 0, 0);
  std::vector<double> x(n);
  for (auto& v : x) v = std::exp(mu + sigma * rng.normal());
  return x;
}

double manual_log_likelihood(const NullCdf& dist,
                             std::span<const double> samples) {
  double ll = 0.0;
  for (double x : samples) ll += std::log(dist.pdf(x));
  return ll;
}

}  // namespace

TEST_CASE("lognormal MLE recovers the generating parameters") {
  const auto x = lognormal_draws(100000, 0.0, 1.0, 42);
  const FitResult fit = fit_mle(Family::Lognormal, x);
  CHECK(fit.params[0] == doctest::Approx(0.0).epsilon(1.0).scale(1.0));
  CHECK(std::fabs(fit.params[0]) < 0.02);
  CHECK(fit.params[1] == doctest::Approx(1.0).epsilon(0.02));
  CHECK(fit.k == 2);
}

TEST_CASE("exponential MLE is the closed-form reciprocal mean") {
  const std::vector<double> x(50, 2.5);
  const FitResult fit = fit_mle(Family::Exponential, x);
  CHECK(fit.params[0] == doctest::Approx(1.0 / 2.5).epsilon(1e-15));
  CHECK(fit.k == 1);
}

TEST_CASE("gamma fit of exponential data has shape near one") {
  RngStream rng(43, make_tag(StreamPurpose::Synthetic), 0, 0);
  std::vector<double> x(100000);
  for (auto& v : x) v = rng.exponential(0.7);
  const FitResult fit = fit_mle(Family::Gamma, x);
  CHECK(fit.params[0] == doctest::Approx(1.0).epsilon(0.05));
  // scale recovers mean/shape
  CHECK(fit.params[0] * fit.params[1] ==
        doctest::Approx(1.0 / 0.7).epsilon(0.02));
}

TEST_CASE("aic arithmetic") {
  FitResult a;
  a.family = Family::Lognormal;
  a.k = 2;
  a.log_likelihood = 0.0;
  CHECK(aic(a) == 4.0);
  FitResult b;
  b.family = Family::Exponential;
  b.k = 1;
  b.log_likelihood = 10.0;
  CHECK(aic(b) == -18.0);
  // Same likelihood, fewer parameters wins.
  a.aic = aic(a);
  FitResult c = a;
  c.family = Family::ChiSquare;
  c.k = 1;
  c.aic = aic(c);
  CHECK(c.aic < a.aic);
}

TEST_CASE("every emitted fit satisfies the AIC identity exactly") {
  const auto x = lognormal_draws(500, 0.3, 0.8, 44);
  for (Family family : kAllFamilies) {
    const FitResult fit = fit_mle(family, x);
    CHECK(fit.aic == 2.0 * fit.k - 2.0 * fit.log_likelihood);
  }
}

TEST_CASE("select_best prefers the lowest AIC with documented tie-breaks") {
  const auto x = lognormal_draws(2000, 0.0, 0.9, 45);
  std::vector<FitResult> fits;
  for (Family family : kAllFamilies) fits.push_back(fit_mle(family, x));
  CHECK(select_best(fits).family == Family::Lognormal);

  CHECK(select_best(std::span(fits.data(), 1)).family == fits[0].family);

  FitResult t1;
  t1.family = Family::Gamma;
  t1.k = 2;
  t1.aic = 10.0;
  FitResult t2;
  t2.family = Family::Exponential;
  t2.k = 1;
  t2.aic = 10.0;
  const std::vector<FitResult> tied = {t1, t2};
  CHECK(select_best(tied).family == Family::Exponential);  // smaller k

  FitResult t3 = t1;
  t3.family = Family::ChiSquare;
  t3.k = 2;
  const std::vector<FitResult> tied2 = {t3, t1};
  CHECK(select_best(tied2).family == Family::ChiSquare);  // enum order

  CHECK_THROWS_AS(select_best({}), InvalidConfigError);
}

TEST_CASE("lognormal data is selected by AIC most of the time") {
  int wins = 0;
  const int reps = 40;
  for (int r = 0; r < reps; ++r) {
    const auto x = lognormal_draws(2000, 0.1, 1.0, 1000 + static_cast<std::uint64_t>(r));
    std::vector<FitResult> fits;
    for (Family family : kAllFamilies) fits.push_back(fit_mle(family, x));
    if (select_best(fits).family == Family::Lognormal) ++wins;
  }
  CHECK(wins >= 38);
}

TEST_CASE("log-likelihood is maximal at the MLE") {
  RngStream rng(46, make_tag(StreamPurpose::Synthetic), 0, 0);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> x(200);
    for (auto& v : x) v = rng.gamma(2.0 + rng.uniform() * 3.0, 1.5);
    for (Family family : {Family::Lognormal, Family::Gamma, Family::Exponential,
                          Family::ChiSquare}) {
      const FitResult fit = fit_mle(family, x);
      for (double bump : {0.99, 1.01}) {
        FitResult perturbed = fit;
        perturbed.params[0] *= bump;
        CHECK(manual_log_likelihood(fitted_cdf(perturbed), x) <=
              fit.log_likelihood + 1e-9);
        if (perturbed.params.size() > 1) {
          FitResult p2 = fit;
          p2.params[1] *= bump;
          CHECK(manual_log_likelihood(fitted_cdf(p2), x) <=
                fit.log_likelihood + 1e-9);
        }
      }
    }
  }
}

TEST_CASE("chi-square fit equals a shape-pinned gamma likelihood") {
  const auto x = lognormal_draws(400, 0.8, 0.5, 47);
  const FitResult chi = fit_mle(Family::ChiSquare, x);
  FitResult pinned;
  pinned.family = Family::Gamma;
  pinned.params = {chi.params[0] / 2.0, 2.0};
  pinned.k = 2;
  const double gamma_ll = manual_log_likelihood(fitted_cdf(pinned), x);
  CHECK(chi.log_likelihood == doctest::Approx(gamma_ll).epsilon(1e-9));
}

TEST_CASE("bootstrap p-values are calibrated under the true family") {
  double sum = 0.0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    RngStream rng(800 + static_cast<std::uint64_t>(r), make_tag(StreamPurpose::Synthetic), 0, 0);
    std::vector<double> x(100);
    for (auto& v : x) v = rng.exponential(1.3);
    const FitResult fit = fit_mle(Family::Exponential, x);
    sum += gof_p_value(fit, x, GofTest::AD, 1000, 12345 + static_cast<std::uint64_t>(r));
  }
  CHECK(sum / reps == doctest::Approx(0.5).epsilon(0.1));
  CHECK(std::fabs(sum / reps - 0.5) < 0.05);
}

TEST_CASE("bootstrap p-value smashes a misspecified family") {
  const auto x = lognormal_draws(4096, 0.0, 1.0, 48);
  const FitResult fit = fit_mle(Family::Exponential, x);
  const double p = gof_p_value(fit, x, GofTest::AD, 1000, 7);
  CHECK(p < 0.01);
}

TEST_CASE("bootstrap p-values live on the unit interval") {
  const auto x = lognormal_draws(64, 0.0, 0.5, 49);
  for (Family family : kAllFamilies) {
    const FitResult fit = fit_mle(family, x);
    const double p = gof_p_value(fit, x, GofTest::CM, 1000, 3);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
  }
}

TEST_CASE("argument validation") {
  const std::vector<double> with_zero = {1.0, 0.0, 2.0, 1.0, 1.0,
                                         1.0, 1.0, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(fit_mle(Family::Gamma, with_zero), InvalidConfigError);
  const std::vector<double> too_few = {1.0, 2.0};
  CHECK_THROWS_AS(fit_mle(Family::Lognormal, too_few), InvalidConfigError);
  const auto x = lognormal_draws(64, 0.0, 0.5, 50);
  const FitResult fit = fit_mle(Family::Gamma, x);
  CHECK_THROWS_AS(gof_p_value(fit, x, GofTest::AD, 10, 0), InvalidConfigError);
  CHECK_THROWS_AS(family_from_name("weibull"), InvalidConfigError);
}

TEST_CASE("fit serialization schemas are stable") {
  FitResult fit;
  fit.family = Family::Exponential;
  fit.params = {0.25};
  fit.log_likelihood = -12.5;
  fit.k = 1;
  fit.aic = 2.0 * 1 - 2.0 * (-12.5);
  fit.p_value = 0.4375;
  const std::vector<FitResult> fits = {fit};
  CHECK(fits_to_csv(fits) ==
        "family,param1,param2,log_likelihood,k,aic,p_value\n"
        "exponential,0.25,,-12.5,1,27,0.4375\n");
  const std::string json_text = fits_to_json(fits);
  CHECK(json_text.find("\"rate\": 0.25") != std::string::npos);
  CHECK(json_text.find("\"aic\": 27.0") != std::string::npos);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "specsense/detectors.hpp"
#include "specsense/errors.hpp"
#include "specsense/rng.hpp"

using namespace specsense;

namespace {

EigSpectrum spectrum(std::vector<double> values) {
  std::sort(values.rbegin(), values.rend());
  return EigSpectrum{std::move(values)};
}

EigSpectrum random_positive_spectrum(RngStream& rng, int dim) {
  std::vector<double> v(static_cast<std::size_t>(dim));
  for (auto& x : v) x = std::exp(rng.normal());
  std::sort(v.rbegin(), v.rend());
  return EigSpectrum{std::move(v)};
}

}  // namespace

TEST_CASE("equal eigenvalues give unity for every statistic") {
  const EigSpectrum s = spectrum({2.5, 2.5, 2.5, 2.5});
  CHECK(gamma_mme(s).value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gamma_me_am(s).value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gamma_me_gm(s).value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(gamma_am_gm(s).value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("hand-checked ratios") {
  CHECK(gamma_mme(spectrum({4, 2, 1})).value == doctest::Approx(4.0));
  CHECK(gamma_me_am(spectrum({3, 1})).value == doctest::Approx(1.5));
  CHECK(gamma_me_gm(spectrum({4, 1})).value == doctest::Approx(2.0));
  CHECK(gamma_me_gm(spectrum({8, 4, 2})).value == doctest::Approx(2.0));
  CHECK(gamma_am_gm(spectrum({4, 1})).value == doctest::Approx(1.25));
}

TEST_CASE("rank-1 plus identity covariance, closed-form spectrum") {
  // C = sigma^2 I + p v v^H with |v|^2 = L: eigenvalues {sigma^2 + pL,
  // sigma^2, ...}. Checked through the full eigensolver path.
  const int L = 8;
  const double p = 10.0;
  CovarianceMatrix c;
  c.dim = L;
  c.num_snapshots = 4096;
  c.entries.assign(static_cast<std::size_t>(L) * L, {0.0, 0.0});
  const double theta = 2.0 * M_PI * 1.0e5 / 2.4576e9;
  std::vector<std::complex<double>> v(static_cast<std::size_t>(L));
  for (int i = 0; i < L; ++i) v[static_cast<std::size_t>(i)] = std::polar(1.0, theta * i);
  for (int i = 0; i < L; ++i) {
    for (int j = 0; j < L; ++j) {
      c.at(i, j) = p * v[static_cast<std::size_t>(i)] * std::conj(v[static_cast<std::size_t>(j)]);
    }
    c.at(i, i) += 1.0;
  }
  const EigSpectrum s = eigenvalues(c);
  CHECK(s.lambda_max() == doctest::Approx(1.0 + p * L).epsilon(1e-12));
  CHECK(s.lambda_min() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gamma_mme(s).value == doctest::Approx(81.0).epsilon(1e-10));
  CHECK(gamma_mme(s).value > 1.0 + p);  // far above the null
}

TEST_CASE("statistics are >= 1 with ME-AM bounded by the dimension") {
  RngStream rng(404, make_tag(StreamPurpose::General), 0, 0);
  for (int trial = 0; trial < 10000; ++trial) {
    const int dim = 2 + static_cast<int>(rng.uniform() * 15);
    const EigSpectrum s = random_positive_spectrum(rng, dim);
    const auto g = all_statistics(s);
    for (double v : g) CHECK(v >= 1.0 - 1e-12);
    CHECK(gamma_me_am(s).value <= static_cast<double>(dim) + 1e-12);
  }
}

TEST_CASE("statistics are scale invariant") {
  RngStream rng(405, make_tag(StreamPurpose::General), 0, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const EigSpectrum s = random_positive_spectrum(rng, 8);
    const auto base = all_statistics(s);
    for (double alpha : {1e-3, 7.0, 1e4}) {
      EigSpectrum scaled = s;
      for (auto& v : scaled.values) v *= alpha;
      const auto g = all_statistics(scaled);
      for (std::size_t k = 0; k < 4; ++k) {
        CHECK(std::fabs(g[k] - base[k]) <= 1e-12 * base[k]);
      }
    }
  }
}

TEST_CASE("unity happens only at equal eigenvalues") {
  const EigSpectrum equal = spectrum({3, 3, 3});
  for (double v : all_statistics(equal)) {
    CHECK(std::fabs(v - 1.0) <= 1e-12);
  }
  const EigSpectrum skewed = spectrum({3, 3, 3.0001});
  for (double v : all_statistics(skewed)) CHECK(v > 1.0 + 1e-10);
}

TEST_CASE("growing rank-1 component strictly increases every statistic") {
  // Fixed noise spectrum, rank-1 power swept over a grid: all four
  // statistics respond monotonically.
  const std::vector<double> noise_diag = {1.05, 1.02, 1.0, 0.99, 0.97, 0.95};
  const int L = static_cast<int>(noise_diag.size());
  std::array<double, 4> prev{0.0, 0.0, 0.0, 0.0};
  for (int step = 0; step < 10; ++step) {
    const double p = 0.1 * (step + 1);
    CovarianceMatrix c;
    c.dim = L;
    c.num_snapshots = 1;
    c.entries.assign(static_cast<std::size_t>(L) * L, {0.0, 0.0});
    for (int i = 0; i < L; ++i) {
      for (int j = 0; j < L; ++j) {
        c.at(i, j) = p / L;  // v = all-ones / sqrt(L) direction
      }
      c.at(i, i) += noise_diag[static_cast<std::size_t>(i)];
    }
    const auto g = all_statistics(eigenvalues(c));
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(g[k] > prev[k]);
      prev[k] = g[k];
    }
  }
}

TEST_CASE("name round trips") {
  for (StatKind kind : kAllStatKinds) {
    CHECK(stat_kind_from_name(stat_kind_name(kind)) == kind);
  }
  CHECK(stat_kind_from_name("me_am") == StatKind::ME_AM);
  CHECK_THROWS_AS(stat_kind_from_name("bogus"), InvalidConfigError);
}

TEST_CASE("degenerate spectra are errors, not silent regularization") {
  const EigSpectrum zero_min = spectrum({2.0, 0.0});
  CHECK_THROWS_AS(gamma_mme(zero_min), NumericError);
  CHECK_THROWS_AS(gamma_me_gm(zero_min), NumericError);
  CHECK_THROWS_AS(gamma_am_gm(zero_min), NumericError);
  CHECK(gamma_me_am(zero_min).value == doctest::Approx(2.0));

  const EigSpectrum all_zero = spectrum({0.0, 0.0});
  CHECK_THROWS_AS(gamma_me_am(all_zero), NumericError);
  CHECK_THROWS_AS(compute_statistic(StatKind::MME, EigSpectrum{{}}),
                  InvalidConfigError);
}

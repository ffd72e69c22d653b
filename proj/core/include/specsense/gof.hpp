#ifndef SPECSENSE_GOF_HPP_
#define SPECSENSE_GOF_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "specsense/rng.hpp"

namespace specsense {

enum class GofTest { KS, CM, AD };

std::string gof_test_name(GofTest t);  // ks, cm, ad
GofTest gof_test_from_name(const std::string& s);

// Right-continuous step ECDF with stable tie handling.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples);  // sorts a copy
  double operator()(double x) const;        // F(x) = #{samples <= x} / n
  double left_limit(double x) const;        // F(x-)
  std::size_t size() const { return sorted_.size(); }
  const std::vector<double>& sorted_samples() const { return sorted_; }

 private:
  std::vector<double> sorted_;
};

EmpiricalCdf ecdf(std::span<const double> samples);

// Reference (null) CDF: either an empirical reference or a parametric
// family. pdf() is defined for the parametric families only (it backs the
// quadrature oracle); sample() draws one observation for Monte Carlo
// calibration (bootstrap resampling in the empirical case).
class NullCdf {
 public:
  enum class Kind { EmpiricalReference, Normal, Lognormal, ChiSquare, Gamma, Exponential };

  static NullCdf empirical(std::vector<double> samples);
  static NullCdf normal(double mu, double sigma);
  static NullCdf lognormal(double mu, double sigma);
  static NullCdf chi_square(double dof);
  static NullCdf gamma_dist(double shape, double scale);
  static NullCdf exponential(double rate);

  double cdf(double y) const;
  double pdf(double y) const;
  double sample(RngStream& rng) const;
  Kind kind() const { return kind_; }
  double param_a() const { return a_; }
  double param_b() const { return b_; }
  const std::vector<double>& reference_samples() const;
  std::string describe() const;

  std::string to_json() const;
  static NullCdf from_json(const std::string& text);

 private:
  NullCdf(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}
  Kind kind_;
  double a_ = 0.0;
  double b_ = 0.0;
  std::shared_ptr<const std::vector<double>> ref_;  // sorted
};

struct GofResult {
  GofTest test;
  double statistic;
  double threshold;
  double significance;
  bool reject_null;  // statistic > threshold, strict
};

// Kolmogorov-Smirnov sup-distance, evaluated at both one-sided limits of
// every jump point (of both CDFs when the reference is empirical).
double ks_statistic(const EmpiricalCdf& f1, const NullCdf& f0);

// Cramer-von Mises W^2 = 1/(12n) + sum_i (F0(y_(i)) - (2i-1)/(2n))^2.
double cm_statistic(const EmpiricalCdf& f1, const NullCdf& f0);

// Anderson-Darling with the 1/(u(1-u)) weight, computational form
// A^2 = -n - (1/n) sum_i (2i-1) [ln F0(y_(i)) + ln(1 - F0(y_(n+1-i)))].
// F0 values are clamped to [1e-15, 1-1e-15]; an evaluator output outside
// [0,1] by more than 1e-12 (or NaN) raises a degenerate-F0 error.
double ad_statistic(const EmpiricalCdf& f1, const NullCdf& f0);

double gof_statistic(GofTest test, const EmpiricalCdf& f1, const NullCdf& f0);

// Stephens' small-sample modification for the AD statistic when the
// normal location/scale are estimated from the data:
// A*^2 = A^2 (1 + 4/n - 25/n^2). The composite critical-value table is
// expressed on this scale.
double stephens_modified_ad(double a2, int n);

// AD normality test with estimated mean and sigma (ddof = 1): returns the
// Stephens-modified statistic. Compare against ad_critical_table() or a
// composite-calibrated table.
double ad_normality_statistic(std::span<const double> samples);

// KL divergence between two discrete distributions on a shared binning,
// natural log. Errors where p > 0 meets q == 0.
double kl_divergence(std::span<const double> p, std::span<const double> q);

// Histogram route for continuous samples: Freedman-Diaconis width on the
// pooled sample, 1e-12 floor added to q then renormalized. Raw support
// mismatches (p > 0, q == 0 before flooring) are counted, not fatal.
struct HistogramKl {
  double kl = 0.0;
  int support_mismatch_bins = 0;
  int bins = 0;
};
HistogramKl kl_from_samples(std::span<const double> p_samples,
                            std::span<const double> q_samples);

// The composite-normality AD critical values at 15/10/5/2.5/1%.
const std::map<double, double>& ad_critical_table();

// Monte Carlo critical values: empirical (1-alpha) quantiles of the null
// distribution of the chosen statistic on samples of size n drawn from
// null_spec. composite=true re-estimates location/scale from each
// synthetic sample before computing the statistic (Normal and Lognormal
// references only). Quantile convention: ceiling index, so the empirical
// false-alarm rate never exceeds alpha.
struct GofThresholdTable {
  GofTest test = GofTest::AD;
  int n = 0;
  std::string null_spec;
  bool composite = false;
  int trials = 0;
  std::map<double, double> quantiles;  // alpha -> critical value

  double critical(double alpha) const;  // exact key lookup
  std::string to_json() const;
  static GofThresholdTable from_json(const std::string& text);
};

GofThresholdTable calibrate_critical_values(GofTest test, int n,
                                            const NullCdf& null_spec,
                                            bool composite, int trials,
                                            std::span<const double> significances,
                                            std::uint64_t seed = 0);

// Decision rule: reject H0 ("PU present") iff statistic strictly exceeds
// the threshold at the requested significance.
GofResult run_gof(GofTest test, std::span<const double> samples,
                  const NullCdf& f0, double significance,
                  const GofThresholdTable& thresholds);
GofResult run_gof(GofTest test, std::span<const double> samples,
                  const NullCdf& f0, double significance, double threshold);

// Conservative empirical quantile: k-th smallest with k = ceil((1-alpha)m).
double upper_quantile_threshold(std::span<const double> sorted_values,
                                double alpha);

}  // namespace specsense

#endif  // SPECSENSE_GOF_HPP_

#include "specsense/gof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "specsense/errors.hpp"
#include "specsense/format.hpp"
#include "specsense/parallel.hpp"
#include "specsense/specfun.hpp"

namespace specsense {

namespace {

using nlohmann::json;

constexpr double kClampLow = 1e-15;
constexpr double kClampHigh = 1.0 - 1e-15;
constexpr double kClampTolerance = 1e-12;

double clamp_f0(double u) {
  if (!(u >= -kClampTolerance) || !(u <= 1.0 + kClampTolerance)) {
    throw NumericError("degenerate reference CDF value outside [0,1]");
  }
  return std::min(std::max(u, kClampLow), kClampHigh);
}

}  // namespace

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples)
    : sorted_(std::move(samples)) {
  if (sorted_.empty()) throw InvalidConfigError("ECDF needs samples");
  std::stable_sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

double EmpiricalCdf::left_limit(double x) const {
  const auto it = std::lower_bound(sorted_.begin(), sorted_.end(), x);
  return static_cast<double>(it - sorted_.begin()) /
         static_cast<double>(sorted_.size());
}

EmpiricalCdf ecdf(std::span<const double> samples) {
  return EmpiricalCdf(std::vector<double>(samples.begin(), samples.end()));
}

NullCdf NullCdf::empirical(std::vector<double> samples) {
  if (samples.empty()) throw InvalidConfigError("empirical reference is empty");
  std::stable_sort(samples.begin(), samples.end());
  NullCdf c(Kind::EmpiricalReference, 0.0, 0.0);
  c.ref_ = std::make_shared<const std::vector<double>>(std::move(samples));
  return c;
}

NullCdf NullCdf::normal(double mu, double sigma) {
  if (!(sigma > 0.0)) throw InvalidConfigError("normal: sigma must be positive");
  return NullCdf(Kind::Normal, mu, sigma);
}

NullCdf NullCdf::lognormal(double mu, double sigma) {
  if (!(sigma > 0.0)) {
    throw InvalidConfigError("lognormal: sigma must be positive");
  }
  return NullCdf(Kind::Lognormal, mu, sigma);
}

NullCdf NullCdf::chi_square(double dof) {
  if (!(dof > 0.0)) throw InvalidConfigError("chi-square: dof must be positive");
  return NullCdf(Kind::ChiSquare, dof, 0.0);
}

NullCdf NullCdf::gamma_dist(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw InvalidConfigError("gamma: shape and scale must be positive");
  }
  return NullCdf(Kind::Gamma, shape, scale);
}

NullCdf NullCdf::exponential(double rate) {
  if (!(rate > 0.0)) throw InvalidConfigError("exponential: rate must be positive");
  return NullCdf(Kind::Exponential, rate, 0.0);
}

double NullCdf::cdf(double y) const {
  switch (kind_) {
    case Kind::EmpiricalReference: {
      const auto& r = *ref_;
      const auto it = std::upper_bound(r.begin(), r.end(), y);
      return static_cast<double>(it - r.begin()) / static_cast<double>(r.size());
    }
    case Kind::Normal:
      return normal_cdf((y - a_) / b_);
    case Kind::Lognormal:
      if (y <= 0.0) return 0.0;
      return normal_cdf((std::log(y) - a_) / b_);
    case Kind::ChiSquare:
      if (y <= 0.0) return 0.0;
      return reg_lower_gamma(a_ / 2.0, y / 2.0);
    case Kind::Gamma:
      if (y <= 0.0) return 0.0;
      return reg_lower_gamma(a_, y / b_);
    case Kind::Exponential:
      if (y <= 0.0) return 0.0;
      return -std::expm1(-a_ * y);
  }
  return 0.0;
}

double NullCdf::pdf(double y) const {
  switch (kind_) {
    case Kind::EmpiricalReference:
      throw NumericError("empirical reference has no density");
    case Kind::Normal:
      return normal_pdf((y - a_) / b_) / b_;
    case Kind::Lognormal:
      if (y <= 0.0) return 0.0;
      return normal_pdf((std::log(y) - a_) / b_) / (b_ * y);
    case Kind::ChiSquare: {
      if (y <= 0.0) return 0.0;
      const double k2 = a_ / 2.0;
      return std::exp((k2 - 1.0) * std::log(y) - y / 2.0 - k2 * std::log(2.0) -
                      std::lgamma(k2));
    }
    case Kind::Gamma:
      if (y <= 0.0) return 0.0;
      return std::exp((a_ - 1.0) * std::log(y) - y / b_ - a_ * std::log(b_) -
                      std::lgamma(a_));
    case Kind::Exponential:
      if (y < 0.0) return 0.0;
      return a_ * std::exp(-a_ * y);
  }
  return 0.0;
}

double NullCdf::sample(RngStream& rng) const {
  switch (kind_) {
    case Kind::EmpiricalReference: {
      const auto& r = *ref_;
      const std::size_t i = std::min(
          static_cast<std::size_t>(rng.uniform() * static_cast<double>(r.size())),
          r.size() - 1);
      return r[i];
    }
    case Kind::Normal:
      return a_ + b_ * rng.normal();
    case Kind::Lognormal:
      return std::exp(a_ + b_ * rng.normal());
    case Kind::ChiSquare:
      return rng.gamma(a_ / 2.0, 2.0);
    case Kind::Gamma:
      return rng.gamma(a_, b_);
    case Kind::Exponential:
      return rng.exponential(a_);
  }
  return 0.0;
}

const std::vector<double>& NullCdf::reference_samples() const {
  if (kind_ != Kind::EmpiricalReference || !ref_) {
    throw InvalidConfigError("not an empirical reference");
  }
  return *ref_;
}

std::string NullCdf::describe() const {
  switch (kind_) {
    case Kind::EmpiricalReference:
      return "empirical(n=" + std::to_string(ref_->size()) + ")";
    case Kind::Normal:
      return "normal(" + std::to_string(a_) + "," + std::to_string(b_) + ")";
    case Kind::Lognormal:
      return "lognormal(" + std::to_string(a_) + "," + std::to_string(b_) + ")";
    case Kind::ChiSquare:
      return "chi_square(" + std::to_string(a_) + ")";
    case Kind::Gamma:
      return "gamma(" + std::to_string(a_) + "," + std::to_string(b_) + ")";
    case Kind::Exponential:
      return "exponential(" + std::to_string(a_) + ")";
  }
  return "?";
}

std::string NullCdf::to_json() const {
  json doc;
  switch (kind_) {
    case Kind::EmpiricalReference:
      doc["kind"] = "empirical";
      doc["samples"] = *ref_;
      break;
    case Kind::Normal:
      doc["kind"] = "normal";
      doc["mu"] = a_;
      doc["sigma"] = b_;
      break;
    case Kind::Lognormal:
      doc["kind"] = "lognormal";
      doc["mu"] = a_;
      doc["sigma"] = b_;
      break;
    case Kind::ChiSquare:
      doc["kind"] = "chi_square";
      doc["k"] = a_;
      break;
    case Kind::Gamma:
      doc["kind"] = "gamma";
      doc["shape"] = a_;
      doc["scale"] = b_;
      break;
    case Kind::Exponential:
      doc["kind"] = "exponential";
      doc["rate"] = a_;
      break;
  }
  return doc.dump();
}

NullCdf NullCdf::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidConfigError(std::string("null CDF JSON: ") + e.what());
  }
  const std::string kind = doc.at("kind").get<std::string>();
  if (kind == "empirical") {
    return empirical(doc.at("samples").get<std::vector<double>>());
  }
  if (kind == "normal") {
    return normal(doc.at("mu").get<double>(), doc.at("sigma").get<double>());
  }
  if (kind == "lognormal") {
    return lognormal(doc.at("mu").get<double>(), doc.at("sigma").get<double>());
  }
  if (kind == "chi_square") return chi_square(doc.at("k").get<double>());
  if (kind == "gamma") {
    return gamma_dist(doc.at("shape").get<double>(), doc.at("scale").get<double>());
  }
  if (kind == "exponential") return exponential(doc.at("rate").get<double>());
  throw InvalidConfigError("unknown null CDF kind: " + kind);
}

double ks_statistic(const EmpiricalCdf& f1, const NullCdf& f0) {
  double d = 0.0;
  const auto eval = [&](double y) {
    const double right = std::fabs(f1(y) - f0.cdf(y));
    // Left limits: the ECDF drops to the previous step; a continuous F0 is
    // unchanged, an empirical F0 drops to its own previous step.
    double f0_left = f0.cdf(y);
    if (f0.kind() == NullCdf::Kind::EmpiricalReference) {
      const auto& r = f0.reference_samples();
      const auto it = std::lower_bound(r.begin(), r.end(), y);
      f0_left = static_cast<double>(it - r.begin()) / static_cast<double>(r.size());
    }
    const double left = std::fabs(f1.left_limit(y) - f0_left);
    d = std::max(d, std::max(right, left));
  };
  for (double y : f1.sorted_samples()) eval(y);
  if (f0.kind() == NullCdf::Kind::EmpiricalReference) {
    for (double y : f0.reference_samples()) eval(y);
  }
  return d;
}

double cm_statistic(const EmpiricalCdf& f1, const NullCdf& f0) {
  const auto& y = f1.sorted_samples();
  const double n = static_cast<double>(y.size());
  double w2 = 1.0 / (12.0 * n);
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double u = clamp_f0(f0.cdf(y[i]));
    const double target = (2.0 * static_cast<double>(i + 1) - 1.0) / (2.0 * n);
    w2 += (u - target) * (u - target);
  }
  return w2;
}

double ad_statistic(const EmpiricalCdf& f1, const NullCdf& f0) {
  const auto& y = f1.sorted_samples();
  const std::size_t n = y.size();
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = clamp_f0(f0.cdf(y[i]));
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double weight = 2.0 * static_cast<double>(i + 1) - 1.0;
    acc += weight * (std::log(u[i]) + std::log1p(-u[n - 1 - i]));
  }
  const double dn = static_cast<double>(n);
  return -dn - acc / dn;
}

double gof_statistic(GofTest test, const EmpiricalCdf& f1, const NullCdf& f0) {
  switch (test) {
    case GofTest::KS: return ks_statistic(f1, f0);
    case GofTest::CM: return cm_statistic(f1, f0);
    case GofTest::AD: return ad_statistic(f1, f0);
  }
  throw InvalidConfigError("unknown GoF test");
}

double stephens_modified_ad(double a2, int n) {
  const double dn = static_cast<double>(n);
  return a2 * (1.0 + 4.0 / dn - 25.0 / (dn * dn));
}

double ad_normality_statistic(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw InvalidConfigError("normality test needs >= 2 samples");
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) throw NumericError("normality test: degenerate sample");
  const double a2 =
      ad_statistic(ecdf(samples), NullCdf::normal(mean, sd));
  return stephens_modified_ad(a2, static_cast<int>(n));
}

std::string gof_test_name(GofTest t) {
  switch (t) {
    case GofTest::KS: return "ks";
    case GofTest::CM: return "cm";
    case GofTest::AD: return "ad";
  }
  return "?";
}

GofTest gof_test_from_name(const std::string& s) {
  if (s == "ks") return GofTest::KS;
  if (s == "cm") return GofTest::CM;
  if (s == "ad") return GofTest::AD;
  throw InvalidConfigError("unknown GoF test: " + s);
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw InvalidConfigError("KL divergence needs a shared binning");
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) {
      throw InvalidConfigError("KL divergence needs nonnegative masses");
    }
    if (p[i] > 0.0) {
      if (q[i] <= 0.0) {
        throw NumericError("KL divergence support mismatch: p>0 where q=0");
      }
      kl += p[i] * std::log(p[i] / q[i]);
    }
  }
  return kl;
}

HistogramKl kl_from_samples(std::span<const double> p_samples,
                            std::span<const double> q_samples) {
  if (p_samples.empty() || q_samples.empty()) {
    throw InvalidConfigError("kl_from_samples needs nonempty samples");
  }
  std::vector<double> pooled(p_samples.begin(), p_samples.end());
  pooled.insert(pooled.end(), q_samples.begin(), q_samples.end());
  std::sort(pooled.begin(), pooled.end());
  const double lo = pooled.front();
  const double hi = pooled.back();
  const std::size_t m = pooled.size();
  const double q1 = pooled[static_cast<std::size_t>(0.25 * (m - 1))];
  const double q3 = pooled[static_cast<std::size_t>(0.75 * (m - 1))];
  double width = 2.0 * (q3 - q1) / std::cbrt(static_cast<double>(m));
  int bins;
  if (!(width > 0.0) || hi <= lo) {
    bins = 1;
  } else {
    bins = static_cast<int>(std::ceil((hi - lo) / width));
    bins = std::min(std::max(bins, 1), 4096);
  }

  std::vector<double> p_hist(static_cast<std::size_t>(bins), 0.0);
  std::vector<double> q_hist(static_cast<std::size_t>(bins), 0.0);
  const auto bin_of = [&](double x) {
    if (hi <= lo) return std::size_t{0};
    auto b = static_cast<std::ptrdiff_t>((x - lo) / (hi - lo) * bins);
    b = std::min<std::ptrdiff_t>(std::max<std::ptrdiff_t>(b, 0), bins - 1);
    return static_cast<std::size_t>(b);
  };
  for (double x : p_samples) p_hist[bin_of(x)] += 1.0;
  for (double x : q_samples) q_hist[bin_of(x)] += 1.0;

  HistogramKl out;
  out.bins = bins;
  for (int b = 0; b < bins; ++b) {
    if (p_hist[static_cast<std::size_t>(b)] > 0.0 &&
        q_hist[static_cast<std::size_t>(b)] == 0.0) {
      ++out.support_mismatch_bins;
    }
  }
  const double pn = static_cast<double>(p_samples.size());
  double q_total = 0.0;
  for (auto& v : p_hist) v /= pn;
  for (auto& v : q_hist) {
    v = v / static_cast<double>(q_samples.size()) + 1e-12;
    q_total += v;
  }
  for (auto& v : q_hist) v /= q_total;
  out.kl = kl_divergence(p_hist, q_hist);
  return out;
}

const std::map<double, double>& ad_critical_table() {
  static const std::map<double, double> table = {
      {0.15, 0.57}, {0.10, 0.65}, {0.05, 0.78}, {0.025, 0.90}, {0.01, 1.08}};
  return table;
}

double upper_quantile_threshold(std::span<const double> sorted_values,
                                double alpha) {
  if (sorted_values.empty()) throw InvalidConfigError("empty sample");
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw InvalidConfigError("significance must be in (0,1)");
  }
  const auto m = static_cast<double>(sorted_values.size());
  auto k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * m));
  if (k < 1) k = 1;
  if (k > sorted_values.size()) k = sorted_values.size();
  return sorted_values[k - 1];
}

double GofThresholdTable::critical(double alpha) const {
  for (const auto& [key, value] : quantiles) {
    if (std::fabs(key - alpha) <= 1e-12 * std::max(1.0, std::fabs(alpha))) {
      return value;
    }
  }
  throw InvalidConfigError("no critical value calibrated at this significance");
}

std::string GofThresholdTable::to_json() const {
  json doc;
  doc["test"] = gof_test_name(test);
  doc["n"] = n;
  doc["null_spec"] = null_spec;
  doc["composite"] = composite;
  doc["trials"] = trials;
  json q = json::object();
  for (const auto& [alpha, value] : quantiles) {
    q[format_g9(alpha)] = value;
  }
  doc["quantiles"] = std::move(q);
  return doc.dump(2);
}

GofThresholdTable GofThresholdTable::from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidConfigError(std::string("threshold table JSON: ") + e.what());
  }
  GofThresholdTable t;
  t.test = gof_test_from_name(doc.at("test").get<std::string>());
  t.n = doc.at("n").get<int>();
  t.null_spec = doc.value("null_spec", "");
  t.composite = doc.at("composite").get<bool>();
  t.trials = doc.at("trials").get<int>();
  for (const auto& [key, value] : doc.at("quantiles").items()) {
    t.quantiles[std::stod(key)] = value.get<double>();
  }
  return t;
}

GofThresholdTable calibrate_critical_values(GofTest test, int n,
                                            const NullCdf& null_spec,
                                            bool composite, int trials,
                                            std::span<const double> significances,
                                            std::uint64_t seed) {
  if (trials < 1000) {
    throw InvalidConfigError("calibration needs at least 1000 trials");
  }
  if (n < 1) throw InvalidConfigError("sample size must be positive");
  if (composite && null_spec.kind() != NullCdf::Kind::Normal &&
      null_spec.kind() != NullCdf::Kind::Lognormal) {
    throw InvalidConfigError(
        "composite calibration re-estimates location/scale; use a normal or "
        "lognormal reference");
  }

  std::vector<double> stats(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    RngStream rng(seed, make_tag(StreamPurpose::GofCalibration),
                  static_cast<std::uint32_t>(t));
    std::vector<double> sample(static_cast<std::size_t>(n));
    for (auto& v : sample) v = null_spec.sample(rng);
    if (!composite) {
      stats[t] = gof_statistic(test, EmpiricalCdf(sample), null_spec);
      return;
    }
    // Composite: re-estimate location/scale on the observation scale of
    // the family (log scale for lognormal), as Lilliefors-style tables do.
    const bool log_scale = null_spec.kind() == NullCdf::Kind::Lognormal;
    std::vector<double> obs = sample;
    if (log_scale) {
      for (auto& v : obs) v = std::log(v);
    }
    double mean = 0.0;
    for (double v : obs) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : obs) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / std::max(1.0, static_cast<double>(n - 1)));
    const NullCdf fitted = log_scale ? NullCdf::lognormal(mean, sd)
                                     : NullCdf::normal(mean, sd);
    double stat = gof_statistic(test, EmpiricalCdf(sample), fitted);
    // Composite AD quantiles live on the Stephens-modified scale, the
    // convention the published normality critical values use.
    if (test == GofTest::AD) stat = stephens_modified_ad(stat, n);
    stats[t] = stat;
  });
  std::sort(stats.begin(), stats.end());

  GofThresholdTable table;
  table.test = test;
  table.n = n;
  table.null_spec = null_spec.describe();
  table.composite = composite;
  table.trials = trials;
  for (double alpha : significances) {
    table.quantiles[alpha] = upper_quantile_threshold(stats, alpha);
  }
  return table;
}

GofResult run_gof(GofTest test, std::span<const double> samples,
                  const NullCdf& f0, double significance, double threshold) {
  const double stat = gof_statistic(test, ecdf(samples), f0);
  return {test, stat, threshold, significance, stat > threshold};
}

GofResult run_gof(GofTest test, std::span<const double> samples,
                  const NullCdf& f0, double significance,
                  const GofThresholdTable& thresholds) {
  if (thresholds.test != test) {
    throw InvalidConfigError("threshold table was calibrated for another test");
  }
  return run_gof(test, samples, f0, significance,
                 thresholds.critical(significance));
}

}  // namespace specsense

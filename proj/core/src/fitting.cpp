#include "specsense/fitting.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "specsense/errors.hpp"
#include "specsense/format.hpp"
#include "specsense/parallel.hpp"
#include "specsense/specfun.hpp"

namespace specsense {

namespace {

using nlohmann::json;

struct SampleStats {
  double n = 0.0;
  double mean = 0.0;
  double mean_log = 0.0;
  double var_log = 0.0;  // MLE variance of logs (ddof = 0)
};

SampleStats positive_sample_stats(std::span<const double> samples) {
  if (samples.size() < 10) {
    throw InvalidConfigError("distribution fitting needs at least 10 samples");
  }
  SampleStats s;
  s.n = static_cast<double>(samples.size());
  double sum = 0.0;
  double sum_log = 0.0;
  for (double x : samples) {
    if (!(x > 0.0)) {
      throw InvalidConfigError("distribution fitting needs positive samples");
    }
    sum += x;
    sum_log += std::log(x);
  }
  s.mean = sum / s.n;
  s.mean_log = sum_log / s.n;
  double ss = 0.0;
  for (double x : samples) {
    const double d = std::log(x) - s.mean_log;
    ss += d * d;
  }
  s.var_log = ss / s.n;
  return s;
}

double log_likelihood(const FitResult& fit, std::span<const double> samples) {
  const NullCdf dist = fitted_cdf(fit);
  double ll = 0.0;
  for (double x : samples) ll += std::log(dist.pdf(x));
  return ll;
}

// Newton solve of log(k) - psi(k) = s for the gamma shape (Minka's start).
double gamma_shape_mle(double s) {
  if (!(s > 0.0)) {
    throw NumericError("gamma fit: degenerate sample (zero log-spread)");
  }
  double k = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
  for (int it = 0; it < 200; ++it) {
    const double f = std::log(k) - digamma(k) - s;
    const double fp = 1.0 / k - trigamma(k);
    const double step = f / fp;
    k -= step;
    if (!(k > 0.0)) throw NumericError("gamma fit: shape left the domain");
    if (std::fabs(step) < 1e-10) return k;
  }
  throw NumericError("gamma fit did not converge");
}

// Newton solve of psi(k/2) = mean_log - log 2 for chi-square dof.
double chi_square_dof_mle(double mean_log) {
  const double target = mean_log - std::log(2.0);
  double k = 2.0 * std::exp(target) + 1.0;  // psi(x) ~ log x for large x
  for (int it = 0; it < 200; ++it) {
    const double f = digamma(k / 2.0) - target;
    const double fp = 0.5 * trigamma(k / 2.0);
    const double step = f / fp;
    k -= step;
    if (!(k > 0.0)) throw NumericError("chi-square fit: dof left the domain");
    if (std::fabs(step) < 1e-10) return k;
  }
  throw NumericError("chi-square fit did not converge");
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::Lognormal: return "lognormal";
    case Family::ChiSquare: return "chi_square";
    case Family::Gamma: return "gamma";
    case Family::Exponential: return "exponential";
  }
  return "?";
}

Family family_from_name(const std::string& s) {
  if (s == "lognormal") return Family::Lognormal;
  if (s == "chi_square" || s == "chisquare" || s == "chi2") return Family::ChiSquare;
  if (s == "gamma") return Family::Gamma;
  if (s == "exponential") return Family::Exponential;
  throw InvalidConfigError("unknown family: " + s);
}

FitResult fit_mle(Family family, std::span<const double> samples) {
  const SampleStats s = positive_sample_stats(samples);
  FitResult fit;
  fit.family = family;
  switch (family) {
    case Family::Lognormal: {
      const double sigma = std::sqrt(s.var_log);
      if (!(sigma > 0.0)) {
        throw NumericError("lognormal fit: degenerate sample");
      }
      fit.params = {s.mean_log, sigma};
      fit.k = 2;
      break;
    }
    case Family::ChiSquare: {
      fit.params = {chi_square_dof_mle(s.mean_log)};
      fit.k = 1;
      break;
    }
    case Family::Gamma: {
      const double shape = gamma_shape_mle(std::log(s.mean) - s.mean_log);
      fit.params = {shape, s.mean / shape};
      fit.k = 2;
      break;
    }
    case Family::Exponential: {
      fit.params = {1.0 / s.mean};
      fit.k = 1;
      break;
    }
  }
  fit.log_likelihood = log_likelihood(fit, samples);
  fit.aic = 2.0 * fit.k - 2.0 * fit.log_likelihood;
  return fit;
}

double aic(const FitResult& fit) {
  return 2.0 * fit.k - 2.0 * fit.log_likelihood;
}

const FitResult& select_best(std::span<const FitResult> fits) {
  if (fits.empty()) throw InvalidConfigError("select_best: no fits");
  const FitResult* best = &fits[0];
  for (const auto& f : fits.subspan(1)) {
    if (f.aic < best->aic ||
        (f.aic == best->aic &&
         (f.k < best->k ||
          (f.k == best->k && static_cast<int>(f.family) <
                                 static_cast<int>(best->family))))) {
      best = &f;
    }
  }
  return *best;
}

NullCdf fitted_cdf(const FitResult& fit) {
  switch (fit.family) {
    case Family::Lognormal:
      return NullCdf::lognormal(fit.params.at(0), fit.params.at(1));
    case Family::ChiSquare:
      return NullCdf::chi_square(fit.params.at(0));
    case Family::Gamma:
      return NullCdf::gamma_dist(fit.params.at(0), fit.params.at(1));
    case Family::Exponential:
      return NullCdf::exponential(fit.params.at(0));
  }
  throw InvalidConfigError("unknown family");
}

double sample_from(const FitResult& fit, RngStream& rng) {
  return fitted_cdf(fit).sample(rng);
}

double gof_p_value(const FitResult& fit, std::span<const double> samples,
                   GofTest test, int trials, std::uint64_t seed) {
  if (trials < 1000) {
    throw InvalidConfigError("bootstrap p-value needs at least 1000 trials");
  }
  const double observed = gof_statistic(test, ecdf(samples), fitted_cdf(fit));
  const std::size_t n = samples.size();
  std::vector<char> exceed(static_cast<std::size_t>(trials), 0);
  parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    RngStream rng(seed, make_tag(StreamPurpose::Bootstrap,
                                 static_cast<std::uint32_t>(fit.family)),
                  static_cast<std::uint32_t>(t));
    std::vector<double> synthetic(n);
    for (auto& v : synthetic) v = sample_from(fit, rng);
    const FitResult refit = fit_mle(fit.family, synthetic);
    const double stat = gof_statistic(test, ecdf(synthetic), fitted_cdf(refit));
    exceed[t] = stat >= observed ? 1 : 0;
  });
  double count = 0.0;
  for (char e : exceed) count += e;
  return count / static_cast<double>(trials);
}

std::string fits_to_csv(std::span<const FitResult> fits) {
  std::string out = "family,param1,param2,log_likelihood,k,aic,p_value\n";
  for (const auto& f : fits) {
    out += family_name(f.family);
    out += ',';
    out += format_g9(f.params.at(0));
    out += ',';
    if (f.params.size() > 1) out += format_g9(f.params.at(1));
    out += ',';
    out += format_g9(f.log_likelihood);
    out += ',';
    out += std::to_string(f.k);
    out += ',';
    out += format_g9(f.aic);
    out += ',';
    out += format_g9(f.p_value);
    out += '\n';
  }
  return out;
}

std::string fits_to_json(std::span<const FitResult> fits) {
  json arr = json::array();
  for (const auto& f : fits) {
    json item;
    item["family"] = family_name(f.family);
    json params;
    switch (f.family) {
      case Family::Lognormal:
        params["mu"] = f.params.at(0);
        params["sigma"] = f.params.at(1);
        break;
      case Family::ChiSquare:
        params["k"] = f.params.at(0);
        break;
      case Family::Gamma:
        params["shape"] = f.params.at(0);
        params["scale"] = f.params.at(1);
        break;
      case Family::Exponential:
        params["rate"] = f.params.at(0);
        break;
    }
    item["params"] = std::move(params);
    item["log_likelihood"] = f.log_likelihood;
    item["k"] = f.k;
    item["aic"] = f.aic;
    item["p_value"] = f.p_value;
    arr.push_back(std::move(item));
  }
  return arr.dump(2);
}

}  // namespace specsense

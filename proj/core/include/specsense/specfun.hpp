#ifndef SPECSENSE_SPECFUN_HPP_
#define SPECSENSE_SPECFUN_HPP_

namespace specsense {

double normal_cdf(double x);                      // standard normal
double normal_pdf(double x);

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
// Series expansion for x < a + 1, Lentz continued fraction otherwise.
double reg_lower_gamma(double a, double x);

double digamma(double x);
double trigamma(double x);

}  // namespace specsense

#endif  // SPECSENSE_SPECFUN_HPP_

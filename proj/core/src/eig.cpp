#include "specsense/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "specsense/errors.hpp"

namespace specsense {

namespace {

// Compensated accumulation; the covariance entries feed PSD/Hermitian
// checks at 1e-12 scale, so plain summation over 10^6 samples is too sloppy.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

struct KahanComplex {
  KahanSum re, im;
  void add(std::complex<double> v) {
    re.add(v.real());
    im.add(v.imag());
  }
  std::complex<double> value() const { return {re.sum, im.sum}; }
};

}  // namespace

double CovarianceMatrix::trace() const {
  double t = 0.0;
  for (int i = 0; i < dim; ++i) t += at(i, i).real();
  return t;
}

CovarianceMatrix sample_covariance(const Waveform& x, int smoothing_L) {
  if (smoothing_L < 2) throw InvalidConfigError("smoothing_L must be >= 2");
  const std::size_t n = x.samples.size();
  if (n < 2 * static_cast<std::size_t>(smoothing_L)) {
    throw InvalidConfigError("capture too short for smoothing_L");
  }
  const int L = smoothing_L;
  const std::size_t windows = n - static_cast<std::size_t>(L) + 1;

  CovarianceMatrix c;
  c.dim = L;
  c.num_snapshots = static_cast<int>(windows);
  c.entries.assign(static_cast<std::size_t>(L) * L, {0.0, 0.0});

  // Windows overlap, so the (i, j) entry is a sliding sum of the lag
  // d = i - j product sequence; one accurate base sum per lag, then O(L)
  // edge updates along the diagonal.
  const auto* s = x.samples.data();
  const double inv_m = 1.0 / static_cast<double>(windows);
  std::vector<std::complex<double>> lagprod(n);
  for (int d = 0; d < L; ++d) {
    const std::size_t valid = n - static_cast<std::size_t>(d);
    for (std::size_t k = 0; k < valid; ++k) {
      lagprod[k] = s[k + static_cast<std::size_t>(d)] * std::conj(s[k]);
    }
    KahanComplex base;
    for (std::size_t k = 0; k < windows; ++k) base.add(lagprod[k]);
    std::complex<double> acc = base.value();
    // entries (j + d, j) for j = 0 .. L-1-d
    for (int j = 0; j + d < L; ++j) {
      if (j > 0) {
        acc += lagprod[windows + static_cast<std::size_t>(j) - 1] -
               lagprod[static_cast<std::size_t>(j) - 1];
      }
      const std::complex<double> value = acc * inv_m;
      c.at(j + d, j) = value;
      c.at(j, j + d) = std::conj(value);
    }
  }
  for (int i = 0; i < L; ++i) c.at(i, i) = {c.at(i, i).real(), 0.0};
  return c;
}

CovarianceMatrix sample_covariance(std::span<const Waveform> rx,
                                   int smoothing_L) {
  if (rx.empty()) throw InvalidConfigError("no receiver waveforms");
  if (smoothing_L < 2) throw InvalidConfigError("smoothing_L must be >= 2");
  const std::size_t n = rx.front().samples.size();
  for (const auto& w : rx) {
    if (w.samples.size() != n) {
      throw InvalidConfigError("receiver waveforms must share length");
    }
  }
  if (n < 2 * static_cast<std::size_t>(smoothing_L)) {
    throw InvalidConfigError("capture too short for smoothing_L");
  }
  const int L = smoothing_L;
  const int m = static_cast<int>(rx.size());
  const int dim = m * L;
  const std::size_t windows = n - static_cast<std::size_t>(L) + 1;

  CovarianceMatrix c;
  c.dim = dim;
  c.num_snapshots = static_cast<int>(windows);
  c.entries.assign(static_cast<std::size_t>(dim) * dim, {0.0, 0.0});

  // Stacked snapshot v_k = [x_0[k..k+L-1], ..., x_{m-1}[k..k+L-1]].
  std::vector<KahanComplex> acc(static_cast<std::size_t>(dim) * dim);
  std::vector<std::complex<double>> v(static_cast<std::size_t>(dim));
  for (std::size_t k = 0; k < windows; ++k) {
    for (int ch = 0; ch < m; ++ch) {
      for (int l = 0; l < L; ++l) {
        v[static_cast<std::size_t>(ch * L + l)] =
            rx[static_cast<std::size_t>(ch)].samples[k + static_cast<std::size_t>(l)];
      }
    }
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j <= i; ++j) {
        acc[static_cast<std::size_t>(i * dim + j)].add(v[i] * std::conj(v[j]));
      }
    }
  }
  const double inv_m = 1.0 / static_cast<double>(windows);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j <= i; ++j) {
      const std::complex<double> value =
          acc[static_cast<std::size_t>(i * dim + j)].value() * inv_m;
      c.at(i, j) = value;
      c.at(j, i) = std::conj(value);
    }
  }
  for (int i = 0; i < dim; ++i) c.at(i, i) = {c.at(i, i).real(), 0.0};
  return c;
}

EigenDecomposition eig_hermitian(const CovarianceMatrix& c) {
  const int n = c.dim;
  if (n <= 0) throw InvalidConfigError("empty matrix");
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      if (c.at(i, j) != std::conj(c.at(j, i))) {
        throw NumericError("eig_hermitian: matrix is not Hermitian");
      }
    }
  }

  std::vector<std::complex<double>> a(c.entries);
  std::vector<std::complex<double>> v(static_cast<std::size_t>(n) * n,
                                      {0.0, 0.0});
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i) * n + i] = 1.0;

  auto A = [&](int i, int j) -> std::complex<double>& {
    return a[static_cast<std::size_t>(i) * n + j];
  };
  auto V = [&](int i, int j) -> std::complex<double>& {
    return v[static_cast<std::size_t>(i) * n + j];
  };

  double norm = 0.0;
  for (const auto& e : a) norm += std::norm(e);
  norm = std::sqrt(norm);
  const double tol = (norm > 0.0 ? norm : 1.0) * 1e-15;

  constexpr int kMaxSweeps = 64;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) off += 2.0 * std::norm(A(i, j));
    }
    if (std::sqrt(off) <= tol) {
      EigenDecomposition d;
      d.dim = n;
      d.values.resize(static_cast<std::size_t>(n));
      std::vector<int> order(static_cast<std::size_t>(n));
      std::iota(order.begin(), order.end(), 0);
      std::vector<double> diag(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = A(i, i).real();
      std::stable_sort(order.begin(), order.end(),
                       [&](int x, int y) { return diag[x] > diag[y]; });
      d.vectors.resize(static_cast<std::size_t>(n) * n);
      for (int col = 0; col < n; ++col) {
        d.values[static_cast<std::size_t>(col)] = diag[order[col]];
        for (int row = 0; row < n; ++row) {
          d.vectors[static_cast<std::size_t>(row) * n + col] = V(row, order[col]);
        }
      }
      return d;
    }

    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const std::complex<double> apq = A(p, q);
        const double r = std::abs(apq);
        if (r <= tol / (static_cast<double>(n) * n)) continue;
        const std::complex<double> u = apq / r;  // phase of the pivot
        const double app = A(p, p).real();
        const double aqq = A(q, q).real();
        const double tau = (aqq - app) / (2.0 * r);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::fabs(tau) + std::sqrt(1.0 + tau * tau));
        const double cos_t = 1.0 / std::sqrt(1.0 + t * t);
        const double sin_t = t * cos_t;
        const std::complex<double> su = sin_t * u;
        const std::complex<double> su_conj = sin_t * std::conj(u);

        A(p, p) = app - t * r;
        A(q, q) = aqq + t * r;
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        for (int i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const std::complex<double> aip = A(i, p);
          const std::complex<double> aiq = A(i, q);
          A(i, p) = cos_t * aip - su_conj * aiq;
          A(i, q) = su * aip + cos_t * aiq;
          A(p, i) = std::conj(A(i, p));
          A(q, i) = std::conj(A(i, q));
        }
        for (int i = 0; i < n; ++i) {
          const std::complex<double> vip = V(i, p);
          const std::complex<double> viq = V(i, q);
          V(i, p) = cos_t * vip - su_conj * viq;
          V(i, q) = su * vip + cos_t * viq;
        }
      }
    }
  }
  throw NumericError("eig_hermitian: Jacobi sweeps did not converge");
}

EigSpectrum eigenvalues(const CovarianceMatrix& c) {
  EigenDecomposition d = eig_hermitian(c);
  const double floor = -1e-12 * std::fabs(c.trace());
  for (auto& lambda : d.values) {
    if (lambda < 0.0) {
      if (lambda < floor) {
        throw NumericError("eigenvalues: matrix is not positive semidefinite");
      }
      lambda = 0.0;
    }
  }
  return EigSpectrum{std::move(d.values)};
}

}  // namespace specsense

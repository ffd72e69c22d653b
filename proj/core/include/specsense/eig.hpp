#ifndef SPECSENSE_EIG_HPP_
#define SPECSENSE_EIG_HPP_

#include <complex>
#include <span>
#include <vector>

#include "specsense/signal.hpp"

namespace specsense {

// Hermitian by construction; row-major dense storage.
struct CovarianceMatrix {
  int dim = 0;
  std::vector<std::complex<double>> entries;
  int num_snapshots = 0;

  std::complex<double>& at(int i, int j) { return entries[i * dim + j]; }
  const std::complex<double>& at(int i, int j) const {
    return entries[i * dim + j];
  }
  double trace() const;
};

// Temporal smoothing: averages the outer products of the N-L+1 overlapping
// length-L windows of x.
CovarianceMatrix sample_covariance(const Waveform& x, int smoothing_L);

// Spatio-temporal variant: stacks the length-L windows of M aligned
// receiver waveforms into ML-dimensional snapshot vectors.
CovarianceMatrix sample_covariance(std::span<const Waveform> rx,
                                   int smoothing_L);

// Eigenvalues sorted descending. Tiny negatives in [-1e-12*trace, 0) are
// clamped to zero; anything below that is an error.
struct EigSpectrum {
  std::vector<double> values;
  double lambda_max() const { return values.front(); }
  double lambda_min() const { return values.back(); }
  int dim() const { return static_cast<int>(values.size()); }
};

struct EigenDecomposition {
  int dim = 0;
  std::vector<double> values;                   // descending
  std::vector<std::complex<double>> vectors;    // column i pairs values[i]
  std::complex<double> vector_at(int row, int col) const {
    return vectors[row * dim + col];
  }
};

// Cyclic Jacobi rotations on the Hermitian matrix; throws NumericError if
// the sweep cap is exceeded.
EigenDecomposition eig_hermitian(const CovarianceMatrix& c);
EigSpectrum eigenvalues(const CovarianceMatrix& c);

}  // namespace specsense

#endif  // SPECSENSE_EIG_HPP_

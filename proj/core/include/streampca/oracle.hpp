#pragma once

#include "streampca/linalg.hpp"

namespace streampca {

enum class PcaPath {
  kAuto,        ///< covariance when d <= n, Gram otherwise
  kCovariance,  ///< eigendecompose the d x d matrix X X^T / (n - 1)
  kGram,        ///< eigendecompose the n x n matrix X^T X / (n - 1), map u -> Xu / |Xu|
};

struct PcaOptions {
  bool centered = false;  // subtract the sample mean first
  PcaPath path = PcaPath::kAuto;
};

struct BatchPcaResult {
  EigenBasis basis;  // V*, d x k
  Vector values;     // top-k eigenvalues, descending
  PcaPath path = PcaPath::kAuto;
  /// lambda_k and lambda_{k+1} coincide, so V* is not unique (its span of
  /// energy still is).
  bool degenerate = false;

  /// lambda_1 - lambda_2 when k >= 2, NaN otherwise.
  double eigengap() const;
};

/// Top-k eigenpairs of C = X X^T / (n - 1), X being d x n (one sample per
/// column). Eigenvectors are sign-normalized so the entry of largest
/// magnitude is positive. Throws InsufficientSamples unless n >= 2 and
/// 1 <= k <= min(d, n).
BatchPcaResult batch_pca(const Matrix& x, Index k, const PcaOptions& options = {});

/// Top-k eigenpairs of a symmetric matrix (descending).
BatchPcaResult symmetric_top_k(const Matrix& symmetric, Index k);

inline constexpr double kLogConvergenceFloor = 1e-16;

/// 1 - ||X^T W||^2 / ||X^T V*||^2 without clamping.
double convergence_unclamped(const Matrix& x, const EigenBasis& w, const EigenBasis& v_star);

/// convergence_unclamped clamped to [0, 1]. Throws ZeroEnergy when
/// ||X^T V*|| vanishes.
double convergence(const Matrix& x, const EigenBasis& w, const EigenBasis& v_star);

inline double accuracy(double convergence_value) { return 1.0 - convergence_value; }

/// log10(max(c, 1e-16))
double log_convergence(double convergence_value);

/// Holds ground truth for one data matrix and scores estimates against it.
/// When d <= n it keeps the d x d scatter X X^T, so scoring costs O(d^2 k)
/// instead of O(d n k); otherwise it borrows X, which must outlive it.
class Evaluator {
 public:
  Evaluator(const Matrix& x, Index k);

  double convergence_unclamped(const EigenBasis& w) const;
  double convergence(const EigenBasis& w) const;
  double energy(const EigenBasis& w) const;

  const BatchPcaResult& oracle() const noexcept { return oracle_; }
  double reference_energy() const noexcept { return reference_energy_; }

 private:
  const Matrix* samples_ = nullptr;
  Matrix scatter_;
  bool use_scatter_ = false;
  BatchPcaResult oracle_;
  double reference_energy_ = 0.0;
};

}  // namespace streampca

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>

namespace streampca {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class Rng;
class EigenBasis;

namespace detail {
// Skips validation; only for producers that guarantee orthonormal columns.
EigenBasis make_basis_unchecked(Matrix columns);
}  // namespace detail

/// Norms at or below this value are treated as zero: 1e-12 * sqrt(d).
double zero_threshold(Index d);

/// A d x k matrix with orthonormal columns (k <= d). Instances only come out
/// of orthonormalize() or a validated adopt(), so the invariant always holds.
class EigenBasis {
 public:
  static constexpr double kTolerance = 1e-10;

  /// Takes ownership of `columns` after checking unit norms and pairwise
  /// orthogonality to kTolerance. Throws InvalidDims otherwise.
  static EigenBasis adopt(Matrix columns);

  const Matrix& matrix() const noexcept { return columns_; }
  Index dim() const noexcept { return columns_.rows(); }
  Index rank() const noexcept { return columns_.cols(); }
  auto column(Index j) const { return columns_.col(j); }

  /// Flip the sign of column j (still orthonormal).
  void flip(Index j) { columns_.col(j) *= -1.0; }

  /// ||W^T W - I||_F
  double orthonormality_error() const;

 private:
  explicit EigenBasis(Matrix columns) : columns_(std::move(columns)) {}
  friend EigenBasis detail::make_basis_unchecked(Matrix);

  Matrix columns_;
};

/// B consecutive samples (columns) revealed at streaming step `index`.
class DataBlock {
 public:
  DataBlock(Matrix samples, std::size_t index);

  const Matrix& samples() const noexcept { return samples_; }
  Index dim() const noexcept { return samples_.rows(); }
  Index size() const noexcept { return samples_.cols(); }
  std::size_t index() const noexcept { return index_; }

 private:
  Matrix samples_;
  std::size_t index_;
};

enum class RankPolicy {
  kFail,     ///< throw RankDeficient
  kReplace,  ///< substitute a random unit vector orthogonal to the prefix
};

Vector normalize(const Vector& v);

/// Modified Gram-Schmidt, left to right, with one re-orthogonalization sweep
/// per column. Dependent columns follow `policy`; replacements draw from
/// `rng` (a fixed internal seed when null).
EigenBasis orthonormalize(const Matrix& m, RankPolicy policy = RankPolicy::kReplace,
                          Rng* rng = nullptr);

/// X (X^T W) / B as two thin products; the d x d Gram matrix is never formed.
Matrix gram_apply(const DataBlock& block, const Matrix& w);

/// ||X^T W||_F^2
double projection_energy(const Matrix& x, const Matrix& w);
double projection_energy(const Matrix& x, const EigenBasis& w);

}  // namespace streampca

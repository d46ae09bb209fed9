#include "streampca/linalg.hpp"

#include <cmath>
#include <string>

#include "streampca/errors.hpp"
#include "streampca/random.hpp"

namespace streampca {

namespace {

// Fixed seed for rank repair when the caller supplies no generator.
constexpr std::uint64_t kDefaultRepairSeed = 0x5eed0f0a11d0c0deULL;

void require_same_rows(Index a, Index b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": " + std::to_string(a) + " vs " +
                            std::to_string(b) + " rows");
  }
}

// Project column j of q against columns [0, j) in place (one MGS sweep).
void project_out_prefix(Matrix& q, Index j) {
  auto v = q.col(j);
  for (Index i = 0; i < j; ++i) {
    v -= q.col(i).dot(v) * q.col(i);
  }
}

}  // namespace

namespace detail {
EigenBasis make_basis_unchecked(Matrix columns) { return EigenBasis(std::move(columns)); }
}  // namespace detail

double zero_threshold(Index d) { return 1e-12 * std::sqrt(static_cast<double>(d)); }

EigenBasis EigenBasis::adopt(Matrix columns) {
  if (columns.cols() > columns.rows()) {
    throw InvalidDims("basis has more columns than rows");
  }
  EigenBasis basis(std::move(columns));
  const Matrix gram = basis.columns_.transpose() * basis.columns_;
  for (Index j = 0; j < gram.cols(); ++j) {
    for (Index i = 0; i < gram.rows(); ++i) {
      const double target = i == j ? 1.0 : 0.0;
      if (!(std::abs(gram(i, j) - target) < kTolerance)) {
        throw InvalidDims("columns are not orthonormal");
      }
    }
  }
  return basis;
}

double EigenBasis::orthonormality_error() const {
  const Index k = rank();
  return (columns_.transpose() * columns_ - Matrix::Identity(k, k)).norm();
}

DataBlock::DataBlock(Matrix samples, std::size_t index)
    : samples_(std::move(samples)), index_(index) {
  if (samples_.cols() < 1) {
    throw InvalidDims("data block needs at least one sample");
  }
  if (!samples_.allFinite()) {
    throw InvalidDims("data block contains non-finite entries");
  }
}

Vector normalize(const Vector& v) {
  const double norm = v.norm();
  if (!(norm > zero_threshold(v.size()))) {
    throw NearZeroVector(norm);
  }
  return v / norm;
}

EigenBasis orthonormalize(const Matrix& m, RankPolicy policy, Rng* rng) {
  const Index d = m.rows();
  const Index k = m.cols();
  if (k > d) {
    throw InvalidDims("orthonormalize needs k <= d, got k=" + std::to_string(k) +
                      " d=" + std::to_string(d));
  }
  if (!m.allFinite()) {
    throw InvalidDims("orthonormalize input contains non-finite entries");
  }

  const double threshold = zero_threshold(d);
  Rng fallback(kDefaultRepairSeed);
  Rng& repair = rng != nullptr ? *rng : fallback;

  Matrix q = m;
  for (Index j = 0; j < k; ++j) {
    project_out_prefix(q, j);
    double norm = q.col(j).norm();
    if (norm > threshold && j > 0) {
      // "Twice is enough": the second sweep recovers orthogonality lost to
      // cancellation without changing the span.
      q.col(j) /= norm;
      project_out_prefix(q, j);
      norm = q.col(j).norm();
    }
    while (!(norm > threshold)) {
      if (policy == RankPolicy::kFail) {
        throw RankDeficient(static_cast<std::size_t>(j));
      }
      for (Index r = 0; r < d; ++r) {
        q(r, j) = repair.normal();
      }
      project_out_prefix(q, j);
      norm = q.col(j).norm();
      if (norm > threshold) {
        q.col(j) /= norm;
        project_out_prefix(q, j);
        norm = q.col(j).norm();
      }
    }
    q.col(j) /= norm;
  }
  return detail::make_basis_unchecked(std::move(q));
}

Matrix gram_apply(const DataBlock& block, const Matrix& w) {
  require_same_rows(block.dim(), w.rows(), "gram_apply");
  const Matrix& x = block.samples();
  const Matrix scores = x.transpose() * w;  // B x k
  Matrix out = x * scores;                  // d x k
  out /= static_cast<double>(block.size());
  return out;
}

double projection_energy(const Matrix& x, const Matrix& w) {
  require_same_rows(x.rows(), w.rows(), "projection_energy");
  return (x.transpose() * w).squaredNorm();
}

double projection_energy(const Matrix& x, const EigenBasis& w) {
  return projection_energy(x, w.matrix());
}

}  // namespace streampca

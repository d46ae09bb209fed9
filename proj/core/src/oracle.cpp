#include "streampca/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <spdlog/spdlog.h>

#include "streampca/errors.hpp"

namespace streampca {

namespace {

void sign_normalize(Matrix& v) {
  for (Index j = 0; j < v.cols(); ++j) {
    Index at = 0;
    v.col(j).cwiseAbs().maxCoeff(&at);
    if (v(at, j) < 0.0) {
      v.col(j) *= -1.0;
    }
  }
}

struct Spectrum {
  Matrix vectors;  // top-k, descending
  Vector values;
  bool degenerate = false;
};

Spectrum top_k(const Matrix& symmetric, Index k) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric);
  if (solver.info() != Eigen::Success) {
    throw Error("symmetric eigendecomposition did not converge");
  }
  const Index m = symmetric.rows();
  Spectrum out;
  out.vectors.resize(m, k);
  out.values.resize(k);
  // Eigen returns ascending order.
  for (Index j = 0; j < k; ++j) {
    out.values[j] = solver.eigenvalues()[m - 1 - j];
    out.vectors.col(j) = solver.eigenvectors().col(m - 1 - j);
  }
  if (k < m) {
    const double lk = out.values[k - 1];
    const double next = solver.eigenvalues()[m - 1 - k];
    out.degenerate = std::abs(lk - next) <= 1e-10 * std::max(1.0, std::abs(lk));
  }
  return out;
}

Matrix scatter_of(const Matrix& x) {
  const Index d = x.rows();
  Matrix s = Matrix::Zero(d, d);
  s.selfadjointView<Eigen::Lower>().rankUpdate(x);
  s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
  return s;
}

BatchPcaResult from_covariance(const Matrix& covariance, Index k) {
  Spectrum spectrum = top_k(covariance, k);
  sign_normalize(spectrum.vectors);
  return {orthonormalize(spectrum.vectors), std::move(spectrum.values), PcaPath::kCovariance,
          spectrum.degenerate};
}

BatchPcaResult from_gram(const Matrix& x, Index k) {
  const double divisor = static_cast<double>(x.cols() - 1);
  Matrix gram = Matrix::Zero(x.cols(), x.cols());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  gram /= divisor;

  Spectrum spectrum = top_k(gram, k);
  Matrix v = x * spectrum.vectors;  // d x k, column norms sqrt(lambda (n - 1))
  for (Index j = 0; j < k; ++j) {
    const double norm = v.col(j).norm();
    if (norm > zero_threshold(v.rows())) {
      v.col(j) /= norm;
    } else {
      // Null direction of C: any completion is valid; Gram-Schmidt below
      // replaces the zero column.
      v.col(j).setZero();
    }
  }
  sign_normalize(v);
  return {orthonormalize(v), std::move(spectrum.values), PcaPath::kGram, spectrum.degenerate};
}

}  // namespace

double BatchPcaResult::eigengap() const {
  if (values.size() < 2) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return values[0] - values[1];
}

BatchPcaResult symmetric_top_k(const Matrix& symmetric, Index k) {
  if (symmetric.rows() != symmetric.cols()) {
    throw DimensionMismatch("symmetric_top_k needs a square matrix");
  }
  if (k < 1 || k > symmetric.rows()) {
    throw InvalidDims("symmetric_top_k needs 1 <= k <= dimension");
  }
  return from_covariance(symmetric, k);
}

BatchPcaResult batch_pca(const Matrix& x, Index k, const PcaOptions& options) {
  const Index d = x.rows();
  const Index n = x.cols();
  if (n < 2) {
    throw InsufficientSamples("batch PCA needs at least 2 samples");
  }
  if (k < 1 || k > std::min(d, n)) {
    throw InsufficientSamples("batch PCA needs 1 <= k <= min(d, n), got k=" +
                              std::to_string(k) + " d=" + std::to_string(d) +
                              " n=" + std::to_string(n));
  }

  Matrix centered;
  const Matrix* data = &x;
  if (options.centered) {
    centered = x.colwise() - x.rowwise().mean();
    data = &centered;
  }

  PcaPath path = options.path;
  if (path == PcaPath::kAuto) {
    path = d <= n ? PcaPath::kCovariance : PcaPath::kGram;
  }

  BatchPcaResult result = [&] {
    if (path == PcaPath::kGram) {
      return from_gram(*data, k);
    }
    Matrix covariance = scatter_of(*data);
    covariance /= static_cast<double>(n - 1);
    return from_covariance(covariance, k);
  }();
  if (result.degenerate) {
    spdlog::warn("batch PCA: eigenvalue {} is repeated; the top-{} basis is not unique", k, k);
  }
  return result;
}

double convergence_unclamped(const Matrix& x, const EigenBasis& w, const EigenBasis& v_star) {
  if (w.rank() != v_star.rank()) {
    throw DimensionMismatch("convergence: estimate and oracle have different k");
  }
  const double reference = projection_energy(x, v_star);
  if (!(reference > 0.0)) {
    throw ZeroEnergy("reference projection energy is zero");
  }
  return 1.0 - projection_energy(x, w) / reference;
}

double convergence(const Matrix& x, const EigenBasis& w, const EigenBasis& v_star) {
  return std::clamp(convergence_unclamped(x, w, v_star), 0.0, 1.0);
}

double log_convergence(double convergence_value) {
  return std::log10(std::max(convergence_value, kLogConvergenceFloor));
}

Evaluator::Evaluator(const Matrix& x, Index k)
    : oracle_([&] {
        const Index d = x.rows();
        const Index n = x.cols();
        if (n < 2) {
          throw InsufficientSamples("evaluation needs at least 2 samples");
        }
        if (k < 1 || k > std::min(d, n)) {
          throw InsufficientSamples("evaluation needs 1 <= k <= min(d, n)");
        }
        if (d <= n) {
          scatter_ = scatter_of(x);
          use_scatter_ = true;
          return from_covariance(scatter_ / static_cast<double>(n - 1), k);
        }
        samples_ = &x;
        return from_gram(x, k);
      }()) {
  reference_energy_ = energy(oracle_.basis);
  if (!(reference_energy_ > 0.0)) {
    throw ZeroEnergy("reference projection energy is zero");
  }
}

double Evaluator::energy(const EigenBasis& w) const {
  if (use_scatter_) {
    if (w.dim() != scatter_.rows()) {
      throw DimensionMismatch("evaluator: basis dimension differs from data");
    }
    return (scatter_ * w.matrix()).cwiseProduct(w.matrix()).sum();
  }
  return projection_energy(*samples_, w);
}

double Evaluator::convergence_unclamped(const EigenBasis& w) const {
  if (w.rank() != oracle_.basis.rank()) {
    throw DimensionMismatch("evaluator: estimate has a different k than the oracle");
  }
  return 1.0 - energy(w) / reference_energy_;
}

double Evaluator::convergence(const EigenBasis& w) const {
  return std::clamp(convergence_unclamped(w), 0.0, 1.0);
}

}  // namespace streampca

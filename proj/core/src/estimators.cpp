#include "streampca/estimators.hpp"

#include <algorithm>
#include <string>

#include <spdlog/spdlog.h>

#include "streampca/errors.hpp"

namespace streampca {

namespace {

void require_shape(const EigenBasis& w, const DataBlock& block, const char* what) {
  if (w.dim() != block.dim()) {
    throw DimensionMismatch(std::string(what) + ": basis dimension " + std::to_string(w.dim()) +
                            " vs block dimension " + std::to_string(block.dim()));
  }
}

}  // namespace

std::string_view method_name(Method method) {
  switch (method) {
    case Method::kBlockPower:
      return "block-power";
    case Method::kBlockOja:
      return "oja";
    case Method::kMomentumBlockPower:
      return "momentum-block-power";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "block-power" || name == "power") {
    return Method::kBlockPower;
  }
  if (name == "oja" || name == "block-oja") {
    return Method::kBlockOja;
  }
  if (name == "momentum-block-power" || name == "momentum") {
    return Method::kMomentumBlockPower;
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

Schedule::Schedule(double a, std::uint64_t seed) : a_(a), rng_(seed) {
  if (!(a >= 0.0)) {
    throw ConfigError("schedule amplitude a must be >= 0");
  }
}

Schedule::Rates schedule_rates(double a, double c, std::uint64_t t) {
  const double scale = a * c + 1.0;
  const double time = static_cast<double>(t);
  return {scale / time, time / scale, c};
}

Schedule::Rates Schedule::next() {
  const double c = rng_.uniform();
  ++draws_;
  return schedule_rates(a_, c, t_++);
}

Matrix block_power_base(const EigenBasis& w, const DataBlock& block) {
  require_shape(w, block, "block_power_base");
  return gram_apply(block, w.matrix());
}

Matrix oja_block_base(const EigenBasis& w, const DataBlock& block, double eta) {
  require_shape(w, block, "oja_block_base");
  if (!(eta >= 0.0)) {
    throw ConfigError("oja learning rate must be >= 0");
  }
  Matrix out = gram_apply(block, w.matrix());
  out *= eta;
  out += w.matrix();
  return out;
}

Matrix momentum_block_power_base(const EigenBasis& w, const EigenBasis* previous,
                                 const DataBlock& block, double beta) {
  require_shape(w, block, "momentum_block_power_base");
  Matrix out = gram_apply(block, w.matrix());
  if (previous != nullptr) {
    if (previous->dim() != w.dim() || previous->rank() != w.rank()) {
      throw DimensionMismatch("momentum: previous basis shape differs from current");
    }
    out -= beta * previous->matrix();
  }
  return out;
}

Matrix accelerate(const Matrix& w_tilde, const EigenBasis& w, double alpha) {
  if (w_tilde.rows() != w.dim() || w_tilde.cols() != w.rank()) {
    throw DimensionMismatch("accelerate: W~ is " + std::to_string(w_tilde.rows()) + "x" +
                            std::to_string(w_tilde.cols()) + ", basis is " +
                            std::to_string(w.dim()) + "x" + std::to_string(w.rank()));
  }
  const Matrix overlap = w.matrix().transpose() * w_tilde;  // k x k
  Matrix out = w_tilde;
  out.noalias() += alpha * (w.matrix() * overlap);
  return out;
}

double objective_g(const EigenBasis& next, const EigenBasis& current) {
  if (next.dim() != current.dim() || next.rank() != current.rank()) {
    throw DimensionMismatch("objective_g: bases have different shapes");
  }
  const double k = static_cast<double>(current.rank());
  const double g = (current.matrix().transpose() * next.matrix()).squaredNorm() / k;
  return std::clamp(g, 0.0, 1.0);
}

EigenBasis init_basis(Index d, Index k, std::uint64_t seed) {
  if (k < 1 || d < k) {
    throw InvalidDims("init_basis needs d >= k >= 1, got d=" + std::to_string(d) +
                      " k=" + std::to_string(k));
  }
  Rng rng(seed);
  Matrix raw(d, k);
  for (Index j = 0; j < k; ++j) {
    for (Index i = 0; i < d; ++i) {
      raw(i, j) = rng.normal();
    }
  }
  return orthonormalize(raw, RankPolicy::kReplace, &rng);
}

Estimator::Estimator(EigenBasis initial, EstimatorOptions options, std::uint64_t schedule_seed)
    : options_(options),
      current_(std::move(initial)),
      schedule_(options.a, schedule_seed),
      repair_rng_(derive_seed(schedule_seed, seed_stream::kRepair)) {}

Matrix Estimator::base_update(const DataBlock& block, double eta) const {
  switch (options_.method) {
    case Method::kBlockPower:
      return block_power_base(current_, block);
    case Method::kBlockOja:
      return oja_block_base(current_, block, eta);
    case Method::kMomentumBlockPower:
      return momentum_block_power_base(current_, previous_ ? &*previous_ : nullptr, block,
                                       options_.beta);
  }
  throw ConfigError("unknown estimator method");
}

StepOutcome Estimator::step(const DataBlock& block) {
  require_shape(current_, block, "Estimator::step");
  // Advance the schedule before anything can fail so every method consumes
  // exactly one draw per step.
  const auto rates = schedule_.next();
  const double alpha = options_.fixed_alpha.value_or(rates.alpha);
  ++steps_;

  Matrix w_tilde = base_update(block, rates.eta);
  if (options_.accelerate) {
    w_tilde = accelerate(w_tilde, current_, alpha);
  }

  const double threshold = zero_threshold(w_tilde.rows());
  bool collapsed = false;
  for (Index j = 0; j < w_tilde.cols(); ++j) {
    const double norm = w_tilde.col(j).norm();
    if (!(norm > threshold)) {
      if (options_.strict) {
        throw NearZeroVector(norm);
      }
      collapsed = true;
      break;
    }
  }

  if (collapsed) {
    ++degenerate_steps_;
    spdlog::warn("step {}: degenerate update, keeping previous estimate", steps_);
    previous_ = current_;
    return {1.0, rates.eta, alpha, true};
  }

  // For k = 1 this is plain normalization.
  EigenBasis next = orthonormalize(
      w_tilde, options_.strict ? RankPolicy::kFail : RankPolicy::kReplace, &repair_rng_);
  const double g = objective_g(next, current_);
  previous_ = std::move(current_);
  current_ = std::move(next);
  return {g, rates.eta, alpha, false};
}

}  // namespace streampca

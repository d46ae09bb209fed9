#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "streampca/linalg.hpp"
#include "streampca/random.hpp"

namespace streampca {

enum class Method { kBlockPower, kBlockOja, kMomentumBlockPower };

std::string_view method_name(Method method);
/// Accepts "block-power", "oja" / "block-oja", "momentum-block-power" / "momentum".
Method parse_method(std::string_view name);

/// Learning-rate schedule eta(t) = (a c_t + 1) / t with c_t ~ U[0, 1) and
/// the coupled acceleration rate alpha_t = 1 / eta(t). One c_t draw per call.
class Schedule {
 public:
  struct Rates {
    double eta;
    double alpha;
    double c;
  };

  Schedule(double a, std::uint64_t seed);

  Rates next();

  double amplitude() const noexcept { return a_; }
  /// Counter of the next update (starts at 1).
  std::uint64_t t() const noexcept { return t_; }
  std::uint64_t draws() const noexcept { return draws_; }

 private:
  double a_;
  std::uint64_t t_ = 1;
  std::uint64_t draws_ = 0;
  Rng rng_;
};

/// Closed form of Schedule::next for a given draw c.
Schedule::Rates schedule_rates(double a, double c, std::uint64_t t);

/// X X^T W / B
Matrix block_power_base(const EigenBasis& w, const DataBlock& block);

/// W + eta X X^T W / B
Matrix oja_block_base(const EigenBasis& w, const DataBlock& block, double eta);

/// X X^T W / B - beta W_prev (heavy ball). Without a previous basis this is
/// plain block power.
Matrix momentum_block_power_base(const EigenBasis& w, const EigenBasis* previous,
                                 const DataBlock& block, double beta);

/// W~ + alpha W (W^T W~), evaluated as a k x k product followed by a d x k
/// product. The result is not normalized.
Matrix accelerate(const Matrix& w_tilde, const EigenBasis& w, double alpha);

/// Alignment objective between consecutive estimates: (w_next . w)^2 for
/// k = 1, ||W^T W_next||_F^2 / k in general. Lies in [0, 1].
double objective_g(const EigenBasis& next, const EigenBasis& current);

/// Random start: i.i.d. standard normal d x k matrix from Rng(seed),
/// column-major, then orthonormalized.
EigenBasis init_basis(Index d, Index k, std::uint64_t seed);

struct EstimatorOptions {
  Method method = Method::kBlockPower;
  bool accelerate = false;
  double a = 2.0;
  double beta = 0.1;
  /// Abort on degenerate updates instead of keeping the previous estimate.
  bool strict = false;
  /// Replaces the scheduled alpha (the schedule still advances).
  std::optional<double> fixed_alpha;
};

struct StepOutcome {
  double g;
  double eta;
  double alpha;
  bool degenerate;  // update collapsed; the estimate was kept unchanged
};

/// One streaming PCA estimator: base update, optional acceleration, then
/// normalization (k = 1) or Gram-Schmidt (k > 1).
class Estimator {
 public:
  Estimator(EigenBasis initial, EstimatorOptions options, std::uint64_t schedule_seed);

  StepOutcome step(const DataBlock& block);

  const EigenBasis& current() const noexcept { return current_; }
  const std::optional<EigenBasis>& previous() const noexcept { return previous_; }
  const Schedule& schedule() const noexcept { return schedule_; }
  const EstimatorOptions& options() const noexcept { return options_; }
  std::uint64_t steps() const noexcept { return steps_; }
  std::uint64_t degenerate_steps() const noexcept { return degenerate_steps_; }

 private:
  Matrix base_update(const DataBlock& block, double eta) const;

  EstimatorOptions options_;
  EigenBasis current_;
  std::optional<EigenBasis> previous_;
  Schedule schedule_;
  Rng repair_rng_;
  std::uint64_t steps_ = 0;
  std::uint64_t degenerate_steps_ = 0;
};

}  // namespace streampca

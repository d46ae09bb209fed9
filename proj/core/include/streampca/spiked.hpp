#pragma once

#include <cstdint>

#include "streampca/linalg.hpp"
#include "streampca/random.hpp"
#include "streampca/stream.hpp"

namespace streampca {

/// Spiked covariance model x = A z + sigma N with a fixed component matrix
/// A in [-1, 1]^{d x k}. Population covariance is A A^T + sigma^2 I.
struct SpikedModel {
  Matrix components;  // A, d x k
  double sigma = 0.0;
  std::uint64_t seed = 0;

  Index dim() const noexcept { return components.rows(); }
  Index rank() const noexcept { return components.cols(); }
};

/// Entries of A are i.i.d. uniform on [-1, 1], drawn column-major from
/// Rng(seed). Throws InvalidDims unless d >= k >= 1 and sigma >= 0.
SpikedModel make_spiked_model(Index d, Index k, double sigma, std::uint64_t seed);

/// One sample. Consumes exactly k + d normal draws: z first, then N.
Vector spiked_sample(const SpikedModel& model, Rng& rng);

/// Endless (or n-bounded) sample stream over a spiked model.
class SpikedStream final : public SampleStream {
 public:
  SpikedStream(SpikedModel model, std::uint64_t seed, std::size_t limit);

  Index dim() const override { return model_.dim(); }
  const SpikedModel& model() const noexcept { return model_; }

 protected:
  std::optional<Vector> produce() override;

 private:
  SpikedModel model_;
  Rng rng_;
  std::size_t limit_;
};

}  // namespace streampca

#include "streampca/spiked.hpp"

#include <string>

#include "streampca/errors.hpp"

namespace streampca {

SpikedModel make_spiked_model(Index d, Index k, double sigma, std::uint64_t seed) {
  if (k < 1 || d < k) {
    throw InvalidDims("spiked model needs d >= k >= 1, got d=" + std::to_string(d) +
                      " k=" + std::to_string(k));
  }
  if (!(sigma >= 0.0)) {
    throw InvalidDims("spiked model needs sigma >= 0");
  }
  Rng rng(seed);
  SpikedModel model{Matrix(d, k), sigma, seed};
  for (Index j = 0; j < k; ++j) {
    for (Index i = 0; i < d; ++i) {
      model.components(i, j) = rng.uniform(-1.0, 1.0);
    }
  }
  return model;
}

Vector spiked_sample(const SpikedModel& model, Rng& rng) {
  Vector z(model.rank());
  for (Index j = 0; j < z.size(); ++j) {
    z[j] = rng.normal();
  }
  Vector x = model.components * z;
  for (Index i = 0; i < x.size(); ++i) {
    x[i] += model.sigma * rng.normal();
  }
  return x;
}

SpikedStream::SpikedStream(SpikedModel model, std::uint64_t seed, std::size_t limit)
    : model_(std::move(model)), rng_(seed), limit_(limit) {}

std::optional<Vector> SpikedStream::produce() {
  if (emitted() >= limit_) {
    return std::nullopt;
  }
  return spiked_sample(model_, rng_);
}

}  // namespace streampca

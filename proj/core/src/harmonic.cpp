#include "streampca/harmonic.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "streampca/errors.hpp"
#include "streampca/random.hpp"

namespace streampca {

void HarmonicModel::validate() const {
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto& mode = modes[i];
    if (mode.direction.size() != dim) {
      throw DimensionMismatch("harmonic mode " + std::to_string(i) + " has wrong dimension");
    }
    if (std::abs(mode.direction.norm() - 1.0) > 1e-10) {
      throw InvalidDims("harmonic mode " + std::to_string(i) + " direction is not unit length");
    }
    if (!(mode.amplitude > 0.0) || !(mode.angular_frequency > 0.0)) {
      throw InvalidDims("harmonic mode " + std::to_string(i) +
                        " needs positive amplitude and frequency");
    }
    if (i > 0 && !(mode.amplitude < modes[i - 1].amplitude)) {
      throw InvalidDims("harmonic amplitudes must be strictly decreasing");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(mode.direction.dot(modes[j].direction)) > 1e-10) {
        throw InvalidDims("harmonic mode directions must be orthogonal");
      }
    }
  }
  if (!(noise_sigma >= 0.0)) {
    throw InvalidDims("harmonic noise sigma must be >= 0");
  }
}

HarmonicModel make_harmonic_model(const HarmonicParams& p) {
  if (p.mode_count < 1 || p.dim < p.mode_count) {
    throw InvalidDims("harmonic model needs dim >= mode_count >= 1");
  }
  if (!(p.amplitude_max > p.amplitude_min) || !(p.amplitude_min > 0.0)) {
    throw InvalidDims("harmonic model needs amplitude_max > amplitude_min > 0");
  }
  if (!(p.frequency_max >= p.frequency_min) || !(p.frequency_min > 0.0)) {
    throw InvalidDims("harmonic model needs 0 < frequency_min <= frequency_max");
  }

  // Directions first (column-major normals), then per-mode frequency and
  // phase, all from one generator.
  Rng rng(derive_seed(p.seed, 0));
  Matrix raw(p.dim, p.mode_count);
  for (Index j = 0; j < p.mode_count; ++j) {
    for (Index i = 0; i < p.dim; ++i) {
      raw(i, j) = rng.normal();
    }
  }
  const EigenBasis directions = orthonormalize(raw, RankPolicy::kReplace, &rng);

  HarmonicModel model;
  model.dim = p.dim;
  model.noise_sigma = p.noise_sigma;
  model.seed = p.seed;
  model.modes.reserve(static_cast<std::size_t>(p.mode_count));
  const double ratio = p.mode_count > 1
                           ? std::pow(p.amplitude_min / p.amplitude_max,
                                      1.0 / static_cast<double>(p.mode_count - 1))
                           : 1.0;
  double amplitude = p.amplitude_max;
  for (Index j = 0; j < p.mode_count; ++j) {
    HarmonicMode mode;
    mode.direction = directions.column(j);
    mode.amplitude = amplitude;
    mode.angular_frequency = rng.uniform(p.frequency_min, p.frequency_max);
    mode.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    model.modes.push_back(std::move(mode));
    amplitude *= ratio;
  }
  model.validate();
  return model;
}

Vector harmonic_sample(const HarmonicModel& model, std::uint64_t t) {
  Vector x = Vector::Zero(model.dim);
  const double time = static_cast<double>(t);
  for (const auto& mode : model.modes) {
    x += mode.direction * (mode.amplitude * std::sin(mode.angular_frequency * time + mode.phase));
  }
  if (model.noise_sigma > 0.0) {
    Rng rng(derive_seed(model.seed, t + 1));
    for (Index i = 0; i < x.size(); ++i) {
      x[i] += model.noise_sigma * rng.normal();
    }
  }
  return x;
}

HarmonicStream::HarmonicStream(HarmonicModel model, std::size_t limit)
    : model_(std::move(model)), limit_(limit) {
  model_.validate();
}

std::optional<Vector> HarmonicStream::produce() {
  if (emitted() >= limit_) {
    return std::nullopt;
  }
  return harmonic_sample(model_, t_++);
}

}  // namespace streampca

#pragma once

#include <cstdint>
#include <vector>

#include "streampca/linalg.hpp"
#include "streampca/stream.hpp"

namespace streampca {

struct HarmonicMode {
  Vector direction;  // unit length
  double amplitude = 1.0;
  double angular_frequency = 1.0;
  double phase = 0.0;
};

/// Superposition of orthogonal harmonic oscillations plus isotropic noise; a
/// small stand-in for molecular dynamics trajectories in Cartesian
/// coordinates.
struct HarmonicModel {
  Index dim = 0;
  std::vector<HarmonicMode> modes;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  /// Throws InvalidDims on non-orthogonal directions, non-decreasing
  /// amplitudes or non-positive amplitude/frequency.
  void validate() const;
};

/// Parameters for make_harmonic_model. Amplitudes fall geometrically from
/// amplitude_max to amplitude_min; frequencies are drawn uniformly from
/// [frequency_min, frequency_max] and phases from [0, 2 pi).
struct HarmonicParams {
  Index dim = 300;
  Index mode_count = 25;
  double amplitude_max = 10.0;
  double amplitude_min = 1.0;
  double frequency_min = 0.05;
  double frequency_max = 1.5;
  double noise_sigma = 0.1;
  std::uint64_t seed = 0;
};

HarmonicModel make_harmonic_model(const HarmonicParams& params);

/// Sample at step t. Noise is drawn from Rng(derive_seed(model.seed, t)), so
/// the output depends only on the model and t.
Vector harmonic_sample(const HarmonicModel& model, std::uint64_t t);

class HarmonicStream final : public SampleStream {
 public:
  HarmonicStream(HarmonicModel model, std::size_t limit);

  Index dim() const override { return model_.dim; }

 protected:
  std::optional<Vector> produce() override;

 private:
  HarmonicModel model_;
  std::size_t limit_;
  std::uint64_t t_ = 0;
};

}  // namespace streampca

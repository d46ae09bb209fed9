#pragma once

#include <cstdint>
#include <random>

namespace streampca {

/// Portable seeded generator. The engine is std::mt19937_64, whose output
/// sequence is fixed by the C++ standard; the distributions below are
/// implemented here rather than taken from <random>, since those are
/// implementation-defined.
///
/// Draw order:
///  - uniform(): one engine output, top 53 bits scaled to [0, 1).
///  - normal():  two uniform() draws u1, u2 (in that order), Box-Muller
///               cosine branch sqrt(-2 ln(1 - u1)) * cos(2 pi u2).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer over (seed, stream); used to split one trial seed
/// into independent sub-seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

namespace seed_stream {
inline constexpr std::uint64_t kData = 1;
inline constexpr std::uint64_t kInit = 2;
inline constexpr std::uint64_t kSchedule = 3;
inline constexpr std::uint64_t kRepair = 4;
}  // namespace seed_stream

}  // namespace streampca

#include <gtest/gtest.h>

#include "streampca/random.hpp"

namespace streampca {
namespace {

// Reference values come from an independent Python implementation of
// MT19937-64 following the documented draw order.
TEST(Rng, EngineMatchesStandardSequence) {
  Rng rng(5489);
  for (int i = 0; i < 9999; ++i) {
    rng.next_u64();
  }
  EXPECT_EQ(rng.next_u64(), 9981545732273789042ULL);
}

TEST(Rng, UniformDrawsAreFrozen) {
  Rng rng(42);
  EXPECT_DOUBLE_EQ(rng.uniform(), 0.755155532954539);
  EXPECT_DOUBLE_EQ(rng.uniform(), 0.6390313938546974);
  EXPECT_DOUBLE_EQ(rng.uniform(), 0.7521452007480266);
}

TEST(Rng, NormalDrawsAreFrozen) {
  Rng rng(42);
  EXPECT_NEAR(rng.normal(), -1.0771745442782885, 1e-15);
  EXPECT_NEAR(rng.normal(), 1.0945198485006107, 1e-15);
  EXPECT_NEAR(rng.normal(), 1.7947316657951717, 1e-15);
}

TEST(Rng, NormalConsumesTwoEngineOutputs) {
  Rng a(7);
  Rng b(7);
  a.normal();
  b.next_u64();
  b.next_u64();
  EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, UniformStaysInHalfOpenUnitInterval) {
  Rng rng(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(DeriveSeed, IsFrozenAndSeparatesStreams) {
  EXPECT_EQ(derive_seed(1, 1), 13757245211066428519ULL);
  EXPECT_EQ(derive_seed(1, 2), 17911839290282890590ULL);
  EXPECT_EQ(derive_seed(0, 0), 16294208416658607535ULL);
  EXPECT_NE(derive_seed(1, seed_stream::kData), derive_seed(1, seed_stream::kSchedule));
  EXPECT_NE(derive_seed(1, seed_stream::kData), derive_seed(2, seed_stream::kData));
}

}  // namespace
}  // namespace streampca

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "streampca/errors.hpp"
#include "streampca/linalg.hpp"
#include "streampca/oracle.hpp"
#include "streampca/random.hpp"
#include "support/oracles.hpp"

namespace streampca {
namespace {

using testing::gaussian;
using testing::householder_orthonormal;

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) {
    v[i++] = x;
  }
  return v;
}

Matrix cols(std::initializer_list<std::initializer_list<double>> columns) {
  const Index k = static_cast<Index>(columns.size());
  const Index d = static_cast<Index>(columns.begin()->size());
  Matrix m(d, k);
  Index j = 0;
  for (const auto& c : columns) {
    m.col(j++) = vec(c);
  }
  return m;
}

TEST(Normalize, ScalesToUnitLength) {
  EXPECT_TRUE(normalize(vec({3, 4})).isApprox(vec({0.6, 0.8}), 1e-15));
  EXPECT_EQ(normalize(vec({1, 0, 0})), vec({1, 0, 0}));
}

TEST(Normalize, RejectsNearZero) {
  EXPECT_THROW(normalize(vec({1e-20, 0})), NearZeroVector);
  EXPECT_THROW(normalize(Vector::Zero(5)), NearZeroVector);
}

TEST(Normalize, UnitNormProperty) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Vector v = gaussian(17, 1, seed).col(0) * std::pow(10.0, static_cast<double>(seed % 9) - 4);
    EXPECT_NEAR(normalize(v).norm(), 1.0, 1e-12);
  }
}

TEST(ZeroThreshold, ScalesWithSqrtDimension) {
  EXPECT_DOUBLE_EQ(zero_threshold(100), 1e-11);
  EXPECT_DOUBLE_EQ(zero_threshold(1), 1e-12);
}

TEST(Orthonormalize, HandExample) {
  const EigenBasis b = orthonormalize(cols({{1, 0}, {1, 1}}));
  EXPECT_TRUE(b.matrix().isApprox(cols({{1, 0}, {0, 1}}), 1e-15));
}

TEST(Orthonormalize, OrthonormalInputIsFixedPoint) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix q = householder_orthonormal(12, 4, seed);
    EXPECT_LT((orthonormalize(q).matrix() - q).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Orthonormalize, RandomInputGramIsIdentity) {
  const Matrix m = gaussian(8, 3, 11);
  const EigenBasis b = orthonormalize(m);
  const Matrix gram = b.matrix().transpose() * b.matrix();
  EXPECT_LT((gram - Matrix::Identity(3, 3)).norm(), 1e-10);
}

TEST(Orthonormalize, SingleColumnMatchesNormalize) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix m = gaussian(9, 1, seed);
    EXPECT_EQ(orthonormalize(m).matrix().col(0), normalize(m.col(0)));
  }
}

TEST(Orthonormalize, IsIdempotent) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const EigenBasis once = orthonormalize(gaussian(15, 6, seed));
    const EigenBasis twice = orthonormalize(once.matrix());
    EXPECT_LT((once.matrix() - twice.matrix()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Orthonormalize, InvariantToPositiveColumnScaling) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Matrix m = gaussian(10, 4, seed);
    Matrix scaled = m;
    const Matrix factors = gaussian(1, 4, seed + 1000).cwiseAbs().array().exp();
    for (Index j = 0; j < 4; ++j) {
      scaled.col(j) *= factors(0, j);
    }
    EXPECT_LT((orthonormalize(m).matrix() - orthonormalize(scaled).matrix()).cwiseAbs().maxCoeff(),
              1e-12);
  }
}

TEST(Orthonormalize, OutputStaysInInputSpan) {
  const Matrix m = gaussian(20, 5, 3);
  EXPECT_LT(testing::span_residual(orthonormalize(m).matrix(), m), 1e-12);
}

TEST(Orthonormalize, FailPolicyReportsDependentColumn) {
  Matrix m = gaussian(6, 3, 4);
  m.col(2) = 2.0 * m.col(0) - m.col(1);
  try {
    orthonormalize(m, RankPolicy::kFail);
    FAIL() << "expected RankDeficient";
  } catch (const RankDeficient& e) {
    EXPECT_EQ(e.column(), 2u);
  }
  Matrix zero_first = Matrix::Zero(6, 2);
  zero_first(0, 1) = 1.0;
  EXPECT_THROW(orthonormalize(zero_first, RankPolicy::kFail), RankDeficient);
}

TEST(Orthonormalize, ReplacePolicyProducesValidBasis) {
  Matrix m = gaussian(6, 3, 4);
  m.col(1).setZero();
  Rng rng(9);
  const EigenBasis b = orthonormalize(m, RankPolicy::kReplace, &rng);
  EXPECT_LT(b.orthonormality_error(), 1e-12);
  EXPECT_TRUE(b.matrix().col(0).isApprox(normalize(m.col(0)), 1e-15));
}

TEST(Orthonormalize, RejectsBadShapesAndValues) {
  EXPECT_THROW(orthonormalize(gaussian(2, 3, 0)), InvalidDims);
  Matrix m = gaussian(4, 2, 0);
  m(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(orthonormalize(m), InvalidDims);
}

TEST(EigenBasis, AdoptValidates) {
  EXPECT_NO_THROW(EigenBasis::adopt(householder_orthonormal(5, 2, 1)));
  EXPECT_THROW(EigenBasis::adopt(gaussian(5, 2, 1)), InvalidDims);
  EXPECT_THROW(EigenBasis::adopt(Matrix::Identity(2, 3)), InvalidDims);
}

TEST(DataBlock, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(DataBlock(Matrix(3, 0), 0), InvalidDims);
  Matrix bad = Matrix::Ones(3, 2);
  bad(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(DataBlock(bad, 0), InvalidDims);
}

TEST(GramApply, ProjectorExamples) {
  const Vector e1 = vec({1, 0});
  const Vector e2 = vec({0, 1});
  const DataBlock block(e1, 0);
  EXPECT_EQ(Vector(gram_apply(block, e1)), e1);
  EXPECT_EQ(Vector(gram_apply(block, e2)), Vector::Zero(2));
}

TEST(GramApply, MatchesDenseCovarianceProduct) {
  const Matrix x = gaussian(6, 5, 21);
  const Matrix w = gaussian(6, 2, 22);
  const Matrix expected = testing::dense_gram_apply(x, w);
  EXPECT_LT((gram_apply(DataBlock(x, 0), w) - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(GramApply, ResultLiesInBlockSpan) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix x = gaussian(12, 3, seed);
    const Matrix w = gaussian(12, 4, seed + 100);
    const Matrix r = gram_apply(DataBlock(x, 0), w);
    EXPECT_LT(testing::span_residual(r, x), 1e-10 * r.norm());
  }
}

TEST(GramApply, DimensionMismatch) {
  EXPECT_THROW(gram_apply(DataBlock(gaussian(4, 2, 0), 0), gaussian(5, 1, 0)), DimensionMismatch);
}

TEST(ProjectionEnergy, Examples) {
  const Matrix e1 = vec({1, 0});
  EXPECT_DOUBLE_EQ(projection_energy(Matrix::Identity(2, 2), e1), 1.0);
  EXPECT_DOUBLE_EQ(projection_energy(cols({{3, 0}, {0, 1}}), e1), 9.0);
  EXPECT_THROW(projection_energy(Matrix::Identity(3, 3), e1), DimensionMismatch);
}

TEST(ProjectionEnergy, MatchesBruteForceAndIgnoresColumnOrderAndSign) {
  const Matrix x = gaussian(7, 11, 5);
  const EigenBasis w = orthonormalize(gaussian(7, 3, 6));
  const double energy = projection_energy(x, w);
  EXPECT_NEAR(energy, testing::brute_energy(x, w.matrix()), 1e-12 * energy);

  Matrix permuted(7, 3);
  permuted << w.matrix().col(2), w.matrix().col(0), -w.matrix().col(1);
  EXPECT_NEAR(projection_energy(x, permuted), energy, 1e-12 * energy);
}

TEST(ProjectionEnergy, OracleBasisIsMaximal) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix x = gaussian(8, 15, seed);
    const auto oracle = batch_pca(x, 3);
    const double best = projection_energy(x, oracle.basis);
    for (std::uint64_t trial = 0; trial < 10; ++trial) {
      const Matrix w = householder_orthonormal(8, 3, 1000 * seed + trial);
      EXPECT_GE(best, projection_energy(x, w) * (1.0 - 1e-12));
    }
  }
}

}  // namespace
}  // namespace streampca

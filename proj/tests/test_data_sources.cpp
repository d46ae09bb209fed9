#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "streampca/errors.hpp"
#include "streampca/harmonic.hpp"
#include "streampca/oracle.hpp"
#include "streampca/spiked.hpp"
#include "streampca/stream.hpp"
#include "streampca/trajectory.hpp"
#include "support/oracles.hpp"

namespace streampca {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("streampca_ds_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path file(const std::string& name, const std::string& contents) const {
    const fs::path p = path_ / name;
    std::ofstream(p, std::ios::binary) << contents;
    return p;
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

Matrix drain(SampleStream& stream) {
  std::vector<Vector> rows;
  while (auto s = stream.next()) {
    rows.push_back(*s);
  }
  Matrix m(stream.dim(), static_cast<Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    m.col(static_cast<Index>(j)) = rows[j];
  }
  return m;
}

// ---- spiked model ---------------------------------------------------------

TEST(SpikedModel, DeterministicAndInRange) {
  const auto a = make_spiked_model(3, 1, 0.5, 7);
  const auto b = make_spiked_model(3, 1, 0.5, 7);
  EXPECT_EQ(a.components, b.components);
  const auto big = make_spiked_model(200, 10, 1.0, 3);
  EXPECT_LE(big.components.maxCoeff(), 1.0);
  EXPECT_GE(big.components.minCoeff(), -1.0);
}

TEST(SpikedModel, HasFullColumnRank) {
  const auto model = make_spiked_model(100, 10, 0.5, 12);
  Eigen::JacobiSVD<Matrix> svd(model.components);
  const auto& s = svd.singularValues();
  EXPECT_GT(s[s.size() - 1], 1e-6 * s[0]);
}

TEST(SpikedModel, RejectsInvalidDims) {
  EXPECT_THROW(make_spiked_model(3, 0, 0.5, 1), InvalidDims);
  EXPECT_THROW(make_spiked_model(2, 3, 0.5, 1), InvalidDims);
  EXPECT_THROW(make_spiked_model(3, 1, -1.0, 1), InvalidDims);
}

TEST(SpikedSample, NoiselessSingleComponentFollowsDrawOrder) {
  const auto model = make_spiked_model(5, 1, 0.0, 2);
  Rng rng(99);
  Rng shadow(99);
  const double z = shadow.normal();
  const Vector x = spiked_sample(model, rng);
  EXPECT_TRUE(x.isApprox(model.components.col(0) * z, 1e-15));
  // z plus d noise draws consumed even with sigma = 0.
  for (int i = 0; i < 5; ++i) {
    shadow.normal();
  }
  EXPECT_EQ(rng.next_u64(), shadow.next_u64());
}

TEST(SpikedSample, NoiselessSamplesStayInComponentSpan) {
  const auto model = make_spiked_model(30, 3, 0.0, 5);
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const Vector x = spiked_sample(model, rng);
    EXPECT_LT(testing::span_residual(x, model.components), 1e-12);
  }
}

TEST(SpikedSample, EmpiricalCovarianceMatchesModel) {
  const Index d = 10;
  const std::size_t n = 50000;
  const auto model = make_spiked_model(d, 2, 0.5, 17);
  SpikedStream stream(model, 18, n);
  const Matrix x = drain(stream);
  const Matrix empirical = x * x.transpose() / static_cast<double>(n);
  const Matrix truth = model.components * model.components.transpose() +
                       0.25 * Matrix::Identity(d, d);
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) {
      // Var(x_i x_j) = S_ii S_jj + S_ij^2 for a zero-mean Gaussian.
      const double se =
          std::sqrt((truth(i, i) * truth(j, j) + truth(i, j) * truth(i, j)) / static_cast<double>(n));
      EXPECT_LT(std::abs(empirical(i, j) - truth(i, j)), 5.0 * se) << i << "," << j;
    }
  }
}

TEST(SpikedStream, IsBitDeterministic) {
  const auto model = make_spiked_model(20, 2, 1.0, 4);
  SpikedStream a(model, 5, 300);
  SpikedStream b(model, 5, 300);
  EXPECT_EQ(drain(a), drain(b));
  EXPECT_EQ(a.emitted(), 300u);
}

// ---- harmonic model -------------------------------------------------------

HarmonicModel single_mode(double phase) {
  HarmonicModel m;
  m.dim = 3;
  m.modes.push_back({Vector::Unit(3, 1), 1.0, 0.7, phase});
  return m;
}

TEST(HarmonicSample, QuarterPhaseAtTimeZeroIsDirection) {
  const auto model = single_mode(std::numbers::pi / 2);
  EXPECT_TRUE(harmonic_sample(model, 0).isApprox(Vector::Unit(3, 1), 1e-15));
}

TEST(HarmonicSample, NoiselessSamplesAreBoundedAndInModeSpan) {
  HarmonicParams p;
  p.dim = 40;
  p.mode_count = 4;
  p.noise_sigma = 0.0;
  p.seed = 8;
  const auto model = make_harmonic_model(p);
  Matrix directions(p.dim, p.mode_count);
  double bound = 0.0;
  for (Index j = 0; j < p.mode_count; ++j) {
    directions.col(j) = model.modes[static_cast<std::size_t>(j)].direction;
    bound += model.modes[static_cast<std::size_t>(j)].amplitude;
  }
  for (std::uint64_t t = 0; t < 500; t += 7) {
    const Vector x = harmonic_sample(model, t);
    EXPECT_LT(testing::span_residual(x, directions), 1e-12);
    EXPECT_LE(x.norm(), bound + 1e-12);
  }
}

TEST(HarmonicSample, DependsOnlyOnSeedAndStep) {
  HarmonicParams p;
  p.dim = 20;
  p.mode_count = 3;
  p.seed = 2;
  const auto model = make_harmonic_model(p);
  EXPECT_EQ(harmonic_sample(model, 17), harmonic_sample(model, 17));
  HarmonicStream stream(model, 20);
  const Matrix x = drain(stream);
  EXPECT_EQ(Vector(x.col(17)), harmonic_sample(model, 17));
}

TEST(HarmonicModel, BatchOracleRecoversModeDirections) {
  HarmonicParams p;
  p.dim = 50;
  p.mode_count = 2;
  p.amplitude_max = 3.0;
  p.amplitude_min = 1.0;
  p.noise_sigma = 0.1;
  p.seed = 31;
  const auto model = make_harmonic_model(p);
  ASSERT_DOUBLE_EQ(model.modes[0].amplitude, 3.0);
  ASSERT_NEAR(model.modes[1].amplitude, 1.0, 1e-12);
  HarmonicStream stream(model, 2000);
  const Matrix x = drain(stream);
  const auto oracle = batch_pca(x, 2);
  Matrix directions(50, 2);
  directions << model.modes[0].direction, model.modes[1].direction;
  const double acc = accuracy(convergence(x, EigenBasis::adopt(directions), oracle.basis));
  EXPECT_GE(acc, 0.99);
}

TEST(HarmonicModel, ValidateRejectsBadModes) {
  HarmonicModel m = single_mode(0.0);
  m.modes.push_back({Vector::Unit(3, 0), 2.0, 1.0, 0.0});  // amplitude increases
  EXPECT_THROW(m.validate(), InvalidDims);
  m.modes.back().amplitude = 0.5;
  EXPECT_NO_THROW(m.validate());
  m.modes.back().direction = Vector::Unit(3, 1);  // not orthogonal
  EXPECT_THROW(m.validate(), InvalidDims);
}

// ---- blocks and centering -------------------------------------------------

Matrix sequence(Index d, Index n) {
  Matrix m(d, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < d; ++i) {
      m(i, j) = static_cast<double>(j * d + i);
    }
  }
  return m;
}

TEST(Blocks, EvenPartition) {
  const Matrix x = sequence(2, 10);
  MatrixStream stream(x);
  auto reader = blocks(stream, 5);
  auto b0 = reader.next();
  auto b1 = reader.next();
  ASSERT_TRUE(b0 && b1);
  EXPECT_EQ(b0->index(), 0u);
  EXPECT_EQ(b1->index(), 1u);
  EXPECT_EQ(b0->size(), 5);
  EXPECT_EQ(b1->size(), 5);
  EXPECT_FALSE(reader.next());
}

TEST(Blocks, PartialTailKeepsTrueSize) {
  const Matrix x = sequence(2, 7);
  MatrixStream stream(x);
  BlockReader reader(stream, 5);
  EXPECT_EQ(reader.next()->size(), 5);
  EXPECT_EQ(reader.next()->size(), 2);
  EXPECT_FALSE(reader.next());
  EXPECT_EQ(reader.samples_consumed(), 7u);
}

TEST(Blocks, PartitionCoversEverySampleOnceInOrder) {
  for (Index n : {1, 4, 13, 50}) {
    for (Index b : {1, 3, 5, 64}) {
      const Matrix x = sequence(3, n);
      MatrixStream stream(x);
      BlockReader reader(stream, b);
      Matrix rebuilt(3, 0);
      std::size_t expected_index = 0;
      while (auto block = reader.next()) {
        EXPECT_EQ(block->index(), expected_index++);
        rebuilt.conservativeResize(Eigen::NoChange, rebuilt.cols() + block->size());
        rebuilt.rightCols(block->size()) = block->samples();
      }
      EXPECT_EQ(rebuilt, x);
    }
  }
}

TEST(Blocks, RejectsZeroBlockSize) {
  const Matrix x = sequence(2, 3);
  MatrixStream stream(x);
  EXPECT_THROW(BlockReader(stream, 0), InvalidDims);
}

TEST(Centerer, NonePassesThrough) {
  Centerer c(CenterMode::kNone, 3);
  const DataBlock block(sequence(3, 4), 0);
  EXPECT_EQ(c.apply(block).samples(), block.samples());
}

TEST(Centerer, PrecomputedTrueMeanGivesZeroColumnSum) {
  const Matrix x = testing::gaussian(4, 23, 3).array() + 5.0;
  const Vector mean = x.rowwise().mean();
  Centerer c(CenterMode::kPrecomputedMean, 4, mean);
  MatrixStream stream(x);
  BlockReader reader(stream, 5);
  Vector total = Vector::Zero(4);
  while (auto block = reader.next()) {
    total += c.apply(*block).samples().rowwise().sum();
  }
  EXPECT_LT(total.cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Centerer, RunningMeanOnConstantStreamZeroesLaterBlocks) {
  const Vector c = (Vector(3) << 1.5, -2.0, 4.0).finished();
  const Matrix x = c.replicate(1, 17);
  MatrixStream stream(x);
  BlockReader reader(stream, 5);
  Centerer centerer(CenterMode::kRunningMean, 3);
  const DataBlock first = centerer.apply(*reader.next());
  EXPECT_EQ(first.samples(), x.leftCols(5));
  while (auto block = reader.next()) {
    EXPECT_LT(centerer.apply(*block).samples().cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Centerer, Errors) {
  EXPECT_THROW(Centerer(CenterMode::kPrecomputedMean, 3), ConfigError);
  EXPECT_THROW(Centerer(CenterMode::kPrecomputedMean, 3, Vector::Zero(2)), DimensionMismatch);
  Centerer c(CenterMode::kRunningMean, 3);
  EXPECT_THROW(c.apply(DataBlock(Matrix::Ones(2, 2), 0)), DimensionMismatch);
}

// ---- trajectory files -----------------------------------------------------

TEST(Trajectory, ParsesCommaRows) {
  TempDir dir;
  const auto t = load_trajectory(dir.file("a.csv", "1.0,2.0\n3.0,4.0\n"));
  EXPECT_EQ(t.source.dim, 2);
  EXPECT_EQ(t.source.rows, 2u);
  EXPECT_EQ(t.samples, (Matrix(2, 2) << 1, 3, 2, 4).finished());
}

TEST(Trajectory, DetectsWhitespaceTabsAndHeader) {
  TempDir dir;
  const auto spaces = load_trajectory(dir.file("s.txt", "x y z\n  1   2 3\n4 5   6  \n\n\n"));
  EXPECT_EQ(spaces.samples, (Matrix(3, 2) << 1, 4, 2, 5, 3, 6).finished());

  TrajectoryReader tabs(dir.file("t.tsv", "1\t2\r\n3\t4\r\n"));
  EXPECT_EQ(tabs.separator(), Separator::kTab);
  EXPECT_FALSE(tabs.had_header());
  EXPECT_EQ(*tabs.next(), (Vector(2) << 1, 2).finished());
  EXPECT_EQ(*tabs.next(), (Vector(2) << 3, 4).finished());
  EXPECT_FALSE(tabs.next());

  TrajectoryReader header(dir.file("h.csv", "atom1_x,atom1_y\n1e-3,-2.5E2\n"));
  EXPECT_TRUE(header.had_header());
  EXPECT_EQ(*header.next(), (Vector(2) << 1e-3, -250.0).finished());
}

TEST(Trajectory, RaggedRowReportsLine) {
  TempDir dir;
  try {
    load_trajectory(dir.file("r.csv", "1,2\n3,4\n5,6,7\n"));
    FAIL() << "expected RaggedRows";
  } catch (const RaggedRows& e) {
    EXPECT_EQ(e.expected(), 2u);
    EXPECT_EQ(e.got(), 3u);
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(Trajectory, ParseErrorCarriesPosition) {
  TempDir dir;
  try {
    load_trajectory(dir.file("p.csv", "1,2\n3,abc\n"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 3u);
    EXPECT_EQ(e.byte_offset(), 6u);
  }
  EXPECT_THROW(load_trajectory(dir.file("nan.csv", "1,nan\n")), ParseError);
  EXPECT_THROW(load_trajectory(dir.file("gap.csv", "1,2\n\n3,4\n")), ParseError);
  EXPECT_THROW(load_trajectory(dir.file("empty.csv", "")), ParseError);
}

TEST(Trajectory, RoundTripIsBitExact) {
  TempDir dir;
  const Matrix x = testing::gaussian(5, 20, 77) * 1e3;
  const fs::path p = dir.path() / "rt.csv";
  write_trajectory(p, x);
  EXPECT_EQ(load_trajectory(p).samples, x);
}

TEST(Trajectory, ReaderStreamsRowsOnceInOrder) {
  TempDir dir;
  const Matrix x = sequence(4, 9);
  const fs::path p = dir.path() / "seq.csv";
  write_trajectory(p, x);
  TrajectoryReader reader(p);
  EXPECT_EQ(drain(reader), x);
  EXPECT_EQ(reader.emitted(), 9u);
  EXPECT_FALSE(reader.next());
}

TEST(Trajectory, CenterOptionRemovesMean) {
  TempDir dir;
  const auto t = load_trajectory(dir.file("c.csv", "1,10\n3,20\n5,30\n"), {}, true);
  EXPECT_TRUE(t.source.center);
  EXPECT_LT(t.samples.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
}

}  // namespace
}  // namespace streampca

#pragma once

#include <cstddef>
#include <optional>

#include "streampca/linalg.hpp"

namespace streampca {

/// Single-consumer, forward-only sequence of d-dimensional samples.
class SampleStream {
 public:
  virtual ~SampleStream() = default;

  virtual Index dim() const = 0;

  /// Next sample, or nullopt once exhausted.
  std::optional<Vector> next();

  /// Samples handed out so far.
  std::size_t emitted() const noexcept { return emitted_; }

 protected:
  virtual std::optional<Vector> produce() = 0;

 private:
  std::size_t emitted_ = 0;
};

/// Streams the columns of a d x n matrix, in order. The matrix is borrowed
/// and must outlive the stream.
class MatrixStream final : public SampleStream {
 public:
  explicit MatrixStream(const Matrix& samples) : samples_(&samples) {}

  Index dim() const override { return samples_->rows(); }

 protected:
  std::optional<Vector> produce() override;

 private:
  const Matrix* samples_;
  Index next_ = 0;
};

/// Partitions a stream into consecutive blocks of `block_size` samples.
/// A shorter final block is emitted with its true size.
class BlockReader {
 public:
  BlockReader(SampleStream& source, Index block_size);

  std::optional<DataBlock> next();

  std::size_t blocks_emitted() const noexcept { return blocks_; }
  std::size_t samples_consumed() const noexcept { return source_->emitted(); }

 private:
  SampleStream* source_;
  Index block_size_;
  std::size_t blocks_ = 0;
};

inline BlockReader blocks(SampleStream& source, Index block_size) {
  return BlockReader(source, block_size);
}

enum class CenterMode { kNone, kPrecomputedMean, kRunningMean };

/// Mean removal applied block by block.
///  - kNone: pass-through.
///  - kPrecomputedMean: subtract a fixed, supplied mean.
///  - kRunningMean: subtract the mean of every sample seen in earlier
///    blocks, then fold the current block into that mean.
class Centerer {
 public:
  Centerer(CenterMode mode, Index dim, std::optional<Vector> mean = std::nullopt);

  DataBlock apply(const DataBlock& block);

  CenterMode mode() const noexcept { return mode_; }
  const Vector& mean() const noexcept { return mean_; }

 private:
  CenterMode mode_;
  Vector mean_;
  std::size_t seen_ = 0;
};

}  // namespace streampca

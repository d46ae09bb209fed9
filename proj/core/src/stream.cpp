#include "streampca/stream.hpp"

#include <string>

#include "streampca/errors.hpp"

namespace streampca {

std::optional<Vector> SampleStream::next() {
  auto sample = produce();
  if (sample) {
    ++emitted_;
  }
  return sample;
}

std::optional<Vector> MatrixStream::produce() {
  if (next_ >= samples_->cols()) {
    return std::nullopt;
  }
  return Vector(samples_->col(next_++));
}

BlockReader::BlockReader(SampleStream& source, Index block_size)
    : source_(&source), block_size_(block_size) {
  if (block_size < 1) {
    throw InvalidDims("block size must be >= 1");
  }
}

std::optional<DataBlock> BlockReader::next() {
  Matrix samples(source_->dim(), block_size_);
  Index filled = 0;
  while (filled < block_size_) {
    auto sample = source_->next();
    if (!sample) {
      break;
    }
    if (sample->size() != samples.rows()) {
      throw DimensionMismatch("stream produced a sample of dimension " +
                              std::to_string(sample->size()) + ", expected " +
                              std::to_string(samples.rows()));
    }
    samples.col(filled++) = *sample;
  }
  if (filled == 0) {
    return std::nullopt;
  }
  if (filled < block_size_) {
    samples.conservativeResize(Eigen::NoChange, filled);
  }
  return DataBlock(std::move(samples), blocks_++);
}

Centerer::Centerer(CenterMode mode, Index dim, std::optional<Vector> mean)
    : mode_(mode), mean_(Vector::Zero(dim)) {
  if (mode == CenterMode::kPrecomputedMean) {
    if (!mean) {
      throw ConfigError("precomputed-mean centering needs a mean vector");
    }
    if (mean->size() != dim) {
      throw DimensionMismatch("centering mean has dimension " + std::to_string(mean->size()) +
                              ", expected " + std::to_string(dim));
    }
    mean_ = std::move(*mean);
  }
}

DataBlock Centerer::apply(const DataBlock& block) {
  if (block.dim() != mean_.size()) {
    throw DimensionMismatch("block dimension " + std::to_string(block.dim()) +
                            " does not match centering dimension " +
                            std::to_string(mean_.size()));
  }
  switch (mode_) {
    case CenterMode::kNone:
      return block;
    case CenterMode::kPrecomputedMean:
      return DataBlock(block.samples().colwise() - mean_, block.index());
    case CenterMode::kRunningMean: {
      DataBlock out(block.samples().colwise() - mean_, block.index());
      // Incremental mean update over the block's columns.
      for (Index j = 0; j < block.size(); ++j) {
        ++seen_;
        mean_ += (block.samples().col(j) - mean_) / static_cast<double>(seen_);
      }
      return out;
    }
  }
  return block;
}

}  // namespace streampca

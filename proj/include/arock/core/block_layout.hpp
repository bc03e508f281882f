#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace arock {

/// Contiguous partition of [0, n) into m coordinate blocks.
class BlockLayout {
 public:
  BlockLayout() = default;
  /// `offsets` has m+1 entries, starts at 0 and is strictly increasing.
  explicit BlockLayout(std::vector<std::size_t> offsets);

  static BlockLayout scalar(std::size_t n);
  static BlockLayout uniform(std::size_t blocks, std::size_t block_size);
  static BlockLayout from_sizes(const std::vector<std::size_t>& sizes);

  std::size_t num_blocks() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t dim() const { return offsets_.empty() ? 0 : offsets_.back(); }
  std::size_t begin(std::size_t i) const { return offsets_[i]; }
  std::size_t end(std::size_t i) const { return offsets_[i + 1]; }
  std::size_t size(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }
  std::size_t max_block_size() const { return max_size_; }
  bool all_scalar() const { return max_size_ <= 1; }
  std::size_t block_of(std::size_t coord) const { return owner_[coord]; }
  const std::vector<std::size_t>& offsets() const { return offsets_; }

  bool operator==(const BlockLayout& other) const { return offsets_ == other.offsets_; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> owner_;
  std::size_t max_size_ = 0;
};

}  // namespace arock

#include "arock/core/block_layout.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace arock {

BlockLayout::BlockLayout(std::vector<std::size_t> offsets) : offsets_(std::move(offsets)) {
  if (offsets_.size() < 2) throw std::invalid_argument("BlockLayout: need at least one block");
  if (offsets_.front() != 0) throw std::invalid_argument("BlockLayout: offsets must start at 0");
  if (num_blocks() > std::numeric_limits<std::uint32_t>::max())
    throw std::invalid_argument("BlockLayout: too many blocks");
  owner_.resize(offsets_.back());
  for (std::size_t i = 0; i + 1 < offsets_.size(); ++i) {
    if (offsets_[i + 1] <= offsets_[i])
      throw std::invalid_argument("BlockLayout: empty or decreasing block at index " +
                                  std::to_string(i));
    for (std::size_t j = offsets_[i]; j < offsets_[i + 1]; ++j)
      owner_[j] = static_cast<std::uint32_t>(i);
    max_size_ = std::max(max_size_, offsets_[i + 1] - offsets_[i]);
  }
}

BlockLayout BlockLayout::scalar(std::size_t n) { return uniform(n, 1); }

BlockLayout BlockLayout::uniform(std::size_t blocks, std::size_t block_size) {
  std::vector<std::size_t> off(blocks + 1);
  for (std::size_t i = 0; i <= blocks; ++i) off[i] = i * block_size;
  return BlockLayout(std::move(off));
}

BlockLayout BlockLayout::from_sizes(const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> off(sizes.size() + 1, 0);
  for (std::size_t i = 0; i < sizes.size(); ++i) off[i + 1] = off[i] + sizes[i];
  return BlockLayout(std::move(off));
}

}  // namespace arock

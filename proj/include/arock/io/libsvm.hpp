#pragma once

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "arock/io/sparse.hpp"

namespace arock {

/// Malformed input file; the message names the file and line.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary-labelled sparse samples, one row per sample.
struct LabeledDataset {
  SparseMatrixCSR samples;
  std::vector<double> labels;  ///< each -1 or +1

  std::size_t num_samples() const { return samples.rows(); }
  std::size_t num_features() const { return samples.cols(); }
  void validate() const;
  bool operator==(const LabeledDataset& o) const {
    return samples == o.samples && labels == o.labels;
  }
};

/// LIBSVM text format, one sample per line:
///
///     line    := label { ws index ":" value } [ ws ] [ "#" comment ]
///     label   := -1 | +1 | 1      (0/1 files are remapped to -1/+1 with a warning)
///     index   := positive integer, strictly increasing within the line
///
/// Indices are 1-based in the file and 0-based in memory. Entries whose value
/// is zero are dropped. Blank lines and lines starting with '#' are skipped.
/// `min_features` widens the column count beyond the largest index seen.
LabeledDataset parse_libsvm(std::istream& in, const std::string& source_name,
                            std::vector<std::string>* warnings = nullptr,
                            std::size_t min_features = 0);
LabeledDataset read_libsvm(const std::string& path, std::vector<std::string>* warnings = nullptr,
                           std::size_t min_features = 0);

void write_libsvm(std::ostream& out, const LabeledDataset& data);
void write_libsvm(const std::string& path, const LabeledDataset& data);

}  // namespace arock

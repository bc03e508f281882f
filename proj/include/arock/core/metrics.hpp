#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "arock/core/linalg.hpp"

namespace arock {

struct EpochRow {
  std::size_t epoch = 0;
  double residual = 0.0;
  std::optional<double> objective;
  std::optional<double> dist_sq;
  std::optional<double> xi;
  double eta = 0.0;
  std::optional<double> wall_ms;
  std::optional<std::uint64_t> max_staleness;
};

/// Per-epoch log plus run summary. Simulator runs leave the timing and
/// staleness fields empty; engine runs leave xi empty.
struct RunMetrics {
  std::vector<EpochRow> rows;
  Vec final_x;
  double final_residual = 0.0;
  double eta = 0.0;
  std::uint64_t total_updates = 0;
  std::optional<double> wall_ms;

  // engine only
  std::uint64_t max_staleness = 0;
  std::vector<std::uint64_t> agent_updates;
  std::vector<std::uint64_t> staleness_histogram;
  std::vector<std::uint32_t> sampled_order;    ///< per agent, concatenated by agent id
  std::vector<std::uint32_t> committed_order;  ///< global commit order

  std::vector<Vec> trace;  ///< iterate after every update, if requested
  std::vector<std::string> warnings;
};

/// Column header shared by every run mode.
const char* csv_columns();
void write_csv_rows(std::ostream& out, const RunMetrics& m);
/// Summary lines as `#` comments (final residual, staleness, agent counts).
void write_csv_summary(std::ostream& out, const RunMetrics& m);

}  // namespace arock

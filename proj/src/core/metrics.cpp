#include "arock/core/metrics.hpp"

#include <charconv>

namespace arock {
namespace {

void put_double(std::ostream& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.write(buf, res.ptr - buf);
}

void put_opt(std::ostream& out, const std::optional<double>& v) {
  if (v) put_double(out, *v);
}

}  // namespace

const char* csv_columns() {
  return "epoch,fixed_point_residual,objective,dist_sq_to_oracle,xi,eta,wall_ms,max_staleness";
}

void write_csv_rows(std::ostream& out, const RunMetrics& m) {
  out << csv_columns() << '\n';
  for (const auto& r : m.rows) {
    out << r.epoch << ',';
    put_double(out, r.residual);
    out << ',';
    put_opt(out, r.objective);
    out << ',';
    put_opt(out, r.dist_sq);
    out << ',';
    put_opt(out, r.xi);
    out << ',';
    put_double(out, r.eta);
    out << ',';
    put_opt(out, r.wall_ms);
    out << ',';
    if (r.max_staleness) out << *r.max_staleness;
    out << '\n';
  }
}

void write_csv_summary(std::ostream& out, const RunMetrics& m) {
  out << "# final_residual=";
  put_double(out, m.final_residual);
  out << " total_updates=" << m.total_updates;
  if (m.wall_ms) {
    out << " wall_ms=";
    put_double(out, *m.wall_ms);
  }
  out << '\n';
  if (!m.agent_updates.empty()) {
    out << "# max_staleness=" << m.max_staleness << '\n';
    out << "# agent_updates=";
    for (std::size_t a = 0; a < m.agent_updates.size(); ++a)
      out << (a ? ";" : "") << m.agent_updates[a];
    out << '\n';
    // nonzero bins only, as staleness:count; the last bin collects the overflow
    out << "# staleness_histogram=";
    bool first = true;
    for (std::size_t s = 0; s < m.staleness_histogram.size(); ++s) {
      if (m.staleness_histogram[s] == 0) continue;
      const bool overflow = s + 1 == m.staleness_histogram.size();
      out << (first ? "" : ";") << s << (overflow ? "+" : "") << ':' << m.staleness_histogram[s];
      first = false;
    }
    out << '\n';
  }
  for (const auto& w : m.warnings) out << "# warning: " << w << '\n';
}

}  // namespace arock

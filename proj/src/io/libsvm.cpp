#include <cmath>
#include "arock/io/libsvm.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

namespace arock {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view next_token(std::string_view& rest) {
  std::size_t i = 0;
  while (i < rest.size() && is_space(rest[i])) ++i;
  std::size_t j = i;
  while (j < rest.size() && !is_space(rest[j])) ++j;
  std::string_view tok = rest.substr(i, j - i);
  rest.remove_prefix(j);
  return tok;
}

bool parse_number(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_index(std::string_view s, std::size_t& out) {
  if (s.empty()) return false;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw DataError(source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

void LabeledDataset::validate() const {
  if (labels.size() != samples.rows())
    throw DataError("dataset: " + std::to_string(labels.size()) + " labels for " +
                    std::to_string(samples.rows()) + " samples");
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] != 1.0 && labels[i] != -1.0)
      throw DataError("dataset: label of sample " + std::to_string(i) + " is not -1 or +1");
}

LabeledDataset parse_libsvm(std::istream& in, const std::string& source_name,
                            std::vector<std::string>* warnings, std::size_t min_features) {
  std::vector<std::size_t> row_ptr{0}, col_idx;
  std::vector<double> values, raw_labels;
  std::vector<std::size_t> label_lines;
  std::size_t max_col = 0;
  bool any_col = false;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view rest(line);
    const auto hash = rest.find('#');
    if (hash != std::string_view::npos) rest = rest.substr(0, hash);
    std::string_view label_tok = next_token(rest);
    if (label_tok.empty()) continue;

    double label = 0.0;
    if (!parse_number(label_tok, label))
      fail(source_name, lineno, "cannot parse label '" + std::string(label_tok) + "'");
    raw_labels.push_back(label);
    label_lines.push_back(lineno);

    bool first = true;
    std::size_t prev = 0;
    for (std::string_view tok = next_token(rest); !tok.empty(); tok = next_token(rest)) {
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos)
        fail(source_name, lineno, "expected index:value, got '" + std::string(tok) + "'");
      std::size_t idx = 0;
      double val = 0.0;
      if (!parse_index(tok.substr(0, colon), idx) || idx == 0)
        fail(source_name, lineno, "bad feature index in '" + std::string(tok) + "'");
      if (!parse_number(tok.substr(colon + 1), val))
        fail(source_name, lineno, "bad feature value in '" + std::string(tok) + "'");
      if (!first && idx <= prev)
        fail(source_name, lineno,
             "feature indices out of order (" + std::to_string(idx) + " after " +
                 std::to_string(prev) + ")");
      first = false;
      prev = idx;
      if (val == 0.0) continue;
      col_idx.push_back(idx - 1);
      values.push_back(val);
      max_col = std::max(max_col, idx - 1);
      any_col = true;
    }
    row_ptr.push_back(col_idx.size());
  }

  bool pm_one = true, zero_one = true;
  for (double v : raw_labels) {
    pm_one = pm_one && (v == 1.0 || v == -1.0);
    zero_one = zero_one && (v == 0.0 || v == 1.0);
  }
  if (!pm_one) {
    if (zero_one) {
      for (double& v : raw_labels) v = v == 0.0 ? -1.0 : 1.0;
      if (warnings) warnings->push_back(source_name + ": labels {0,1} mapped to {-1,+1}");
    } else {
      for (std::size_t i = 0; i < raw_labels.size(); ++i)
        if (raw_labels[i] != 1.0 && raw_labels[i] != -1.0)
          fail(source_name, label_lines[i],
               "label " + std::to_string(raw_labels[i]) + " is not binary (-1/+1)");
    }
  }

  const std::size_t cols = std::max(min_features, any_col ? max_col + 1 : 0);
  LabeledDataset data;
  const std::size_t rows = row_ptr.size() - 1;
  data.samples = SparseMatrixCSR(rows, cols, std::move(row_ptr), std::move(col_idx),
                                 std::move(values));
  data.labels = std::move(raw_labels);
  data.validate();
  return data;
}

LabeledDataset read_libsvm(const std::string& path, std::vector<std::string>* warnings,
                           std::size_t min_features) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset '" + path + "'");
  return parse_libsvm(in, path, warnings, min_features);
}

void write_libsvm(std::ostream& out, const LabeledDataset& data) {
  data.validate();
  const auto& A = data.samples;
  char buf[64];
  for (std::size_t r = 0; r < A.rows(); ++r) {
    out << (data.labels[r] > 0 ? "+1" : "-1");
    for (std::size_t k = A.row_begin(r); k < A.row_end(r); ++k) {
      auto res = std::to_chars(buf, buf + sizeof(buf), A.values()[k]);
      out << ' ' << (A.col_idx()[k] + 1) << ':';
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

void write_libsvm(const std::string& path, const LabeledDataset& data) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write dataset '" + path + "'");
  write_libsvm(out, data);
}

}  // namespace arock

#pragma once

#include <memory>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "arock/core/operator.hpp"

namespace arock::cli {

/// Everything needed to build one problem instance. Every random choice is
/// driven by `seed`.
struct ProblemSpec {
  std::string kind = "jacobi";
  std::size_t n = 100;
  std::size_t bandwidth = 5;
  double dominance = 0.5;
  std::string data;  ///< LIBSVM file or dataset name looked up in the data dir
  std::size_t samples = 500;
  std::size_t features = 200;
  double density = 0.05;
  double lambda = 1e-4;
  double gamma = 0.0;        ///< 0 selects the operator default
  double gamma_scale = 0.0;  ///< gamma = gamma_scale / L when positive
  std::size_t block_target = 0;  ///< features per block; 0 keeps scalar blocks
  std::string graph = "path";
  std::size_t nodes = 6;
  std::size_t dim = 2;
  std::string admm_mode = "agent";
  double imbalance = 1.0;  ///< density multiplier for the first block of features
  std::uint64_t seed = 1;
};

struct Problem {
  std::unique_ptr<ProblemOperator> op;
  Vec x0;
  std::optional<Vec> x_star;
  /// Strong monotonicity modulus of S when known (linear-rate checks).
  std::optional<double> mu;
  /// Known contraction bound of T for the quasi-contraction sweep.
  std::optional<double> contraction_bound;
  std::vector<std::string> warnings;
  std::string label;
};

const std::vector<std::string>& problem_kinds();

/// Builds the instance; throws std::invalid_argument on a bad spec and
/// DataError on unreadable data. `want_oracle` computes x* where it is not
/// known in closed form (serial solve).
Problem build_problem(const ProblemSpec& spec, bool want_oracle);

/// Resolves a dataset name: an existing path wins, then AROCK_DATA_DIR/<name>
/// with the extensions "", ".libsvm", ".svm", ".txt".
std::string resolve_data_path(const std::string& name);

void to_json(nlohmann::json& j, const ProblemSpec& s);

}  // namespace arock::cli

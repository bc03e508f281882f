#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "problems.hpp"

namespace arock::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kPropertyFailure = 2 };

/// Options shared by every subcommand.
struct CommonConfig {
  ProblemSpec problem;
  std::size_t epochs = 10;
  std::string step = "auto";  ///< auto | constant | fejer | linear
  double eta = 0.0;           ///< constant step; with step=auto a positive value selects it
  double c = 0.99;
  double beta = 0.5;
  double mu = 0.0;            ///< overrides the problem's known modulus for step=linear
  std::uint64_t seed = 0;
  std::string output;         ///< empty or "-" writes to stdout
  bool oracle = true;
};

struct SimulateConfig {
  CommonConfig common;
  std::size_t tau = 0;
  std::string policy = "uniform";
  std::string read = "inconsistent";
  std::string verify = "none";  ///< none | fundamental | linear
  std::size_t trials = 200;
  std::size_t verify_steps = 0;  ///< 0 checks every step of the run
  std::size_t seeds = 20;
  std::string verify_out;
};

struct RunConfig {
  CommonConfig common;
  std::size_t agents = 1;
  std::string scheme;  ///< empty picks the layout default
  std::string baseline;
  std::optional<std::size_t> assumed_tau;
  bool record_orders = false;
};

struct VerifyConfig {
  CommonConfig common;
  std::size_t max_dim = 1000;
  std::size_t samples = 200;
  std::size_t tau = 4;
  std::size_t trials = 200;
  std::size_t steps = 100;
  std::size_t seeds = 20;
};

struct BenchConfig {
  CommonConfig common;
  std::vector<std::size_t> agents = {1, 2, 4};
  bool sync = true;
  std::string scheme;
};

int cmd_simulate(const SimulateConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const VerifyConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace arock::cli

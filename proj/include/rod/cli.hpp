#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "rod/burgers.hpp"
#include "rod/metrics.hpp"

namespace rod::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsageError = 1,
  kComputationFailure = 2,
  kNotDominated = 3,  // compare ran, ROD modes did not dominate
};

/// Parameters shared by all subcommands. Flags override values read from the
/// --config file.
struct RunConfig {
  std::string command;
  std::filesystem::path input;
  std::filesystem::path output;
  std::filesystem::path model;
  std::filesystem::path config;

  std::int64_t rank = 10;
  std::uint64_t seed = 0;
  std::int64_t max_rank = 20;
  double tol = 1e-5;
  std::int64_t oversampling = 0;
  std::int64_t power_iterations = 2;
  bool literal_sampling = false;
  bool reorthonormalize = false;
  metrics::CorrelationVariant correlation = metrics::CorrelationVariant::paper;
  bool same_rank = false;
  bool fourier_self = false;
  unsigned threads = 0;

  burgers::BurgersConfig burgers;
};

/// Rejects parameters outside their module preconditions. Messages start with
/// the offending flag.
void validate(const RunConfig& cfg);

int cmd_generate(const RunConfig& cfg, std::ostream& out);
int cmd_fit(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_evaluate(const RunConfig& cfg, std::ostream& out);
int cmd_compare(const RunConfig& cfg, std::ostream& out);

/// Parses argv, applies the config file, validates and dispatches.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rod::cli

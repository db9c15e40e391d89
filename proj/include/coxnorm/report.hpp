#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace coxnorm::cli {

/// One invocation of the command-line tool.
struct RunConfig {
  std::string command;         // classify, normalizer, brink, leech-example, shells
  std::string pi;              // diagram file, or "leech"
  std::string j;               // comma separated node names, or a spherical type for leech
  std::string gamma_j = "full";  // full, trivial, or a generator file
  std::string r = "full";
  std::string gamma_pi = "trivial";  // finite Pi only
  std::string selector = "first";    // leech configuration choice: first or largest
  std::string node;                  // brink
  std::string example;
  std::string format = "text";  // text, json, dot
  std::optional<std::string> cache;
  int threads = 1;
  std::uint64_t oracle_limit = 1000000;
  std::uint64_t budget = 100'000'000;
  std::uint64_t max_relators = 2'000'000;
  std::optional<std::uint64_t> tree_seed;
  bool verbose = false;  // progress on standard error
};

struct RunResult {
  int status = 0;       // 0 ok, 1 input error, 2 budget refusal
  std::string output;   // the report
  std::string error;
};

RunResult run(const RunConfig& cfg);

/// Builtin example names accepted by --example for a command.
std::vector<std::string> example_names(const std::string& command);

}  // namespace coxnorm::cli

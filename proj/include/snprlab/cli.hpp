#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace snprlab::cli {

enum ExitCode : int {
  kOk = 0,
  kInvalid = 1,          // parse, validation or usage failure; also a negative answer
  kBudgetExhausted = 2,  // a search hit its configured budget
};

enum class Format { kAuto, kEnewick, kPnd };

struct RunConfig {
  std::string subcommand;
  std::vector<std::string> inputs;
  Format format = Format::kAuto;
  std::uint64_t seed = 0;
  std::optional<std::size_t> cap;
  std::optional<std::uint64_t> budget;
  std::size_t jobs = 1;
  bool tree_child_only = true;
  bool bidirectional = true;
  std::optional<std::string> out;
  // gen / enumerate / gap-search
  std::size_t leaves = 4;
  std::size_t reticulations = 0;
  std::size_t count = 1;
};

// Parses argv-style arguments (without the program name) into a config.
// Returns the exit code to stop with when parsing does not yield a config
// (help requested or a usage error), having written to out / err.
std::optional<RunConfig> parse_args(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                                    int& exit_code);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace snprlab::cli

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "flowcalc/cli/report.hpp"
#include "flowcalc/presentation.hpp"

namespace flowcalc::cli {

/// Everything one invocation needs.
struct Manifest {
  std::string command;
  std::string input;
  std::string flow;
  std::string ball;
  std::vector<std::string> edge;  // two state names
  std::size_t vertex = 0;
  std::optional<int> degree;
  int cap = kDefaultCap;
  std::size_t budget = kDefaultBudget;
  Format format = Format::Text;
  std::string dot;
  std::optional<std::uint64_t> seed;
};

/// Exit statuses.
inline constexpr int kPass = 0;
inline constexpr int kCheckFailed = 1;
inline constexpr int kInputError = 2;

struct Outcome {
  Json report;
  int status = kPass;
};

/// Runs one subcommand. Library errors propagate as flowcalc::Error.
Outcome execute(const Manifest& m);

/// Full command line handling: argument parsing, the FLOWCALC_BUDGET
/// fallback, rendering and exit status. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flowcalc::cli

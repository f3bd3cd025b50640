#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "poincare/config.hpp"

namespace poincare::cli {

/// Outcome of one command: the result object embedded in the report, whether
/// every checked inequality held, and optional CSV text for grid data.
struct CommandResult {
  nlohmann::json result = nlohmann::json::object();
  bool passed = true;
  std::string csv;
};

const std::vector<std::string>& command_names();

/// Runs one command. Library errors propagate as poincare::Error.
CommandResult run_command(const std::string& command, const ExperimentConfig& config);

/// The full report: command, version, group source, resolved config, result
/// and status ("ok" or "violated").
nlohmann::json make_report(const std::string& command, const ExperimentConfig& config, const CommandResult& result);

/// Entry point of the pseries tool. Exit codes: 0 success, 2 a checked
/// inequality was violated, 1 input or library error.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace poincare::cli

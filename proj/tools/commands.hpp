#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cli_config.hpp"
#include "csv.hpp"
#include "phasebound/prior.hpp"

namespace phasebound::cli {

// One CSV destined for one file. `suffix` is appended to the output stem
// ("_alpha10" for per-prior outputs, empty otherwise).
struct CommandOutput {
  std::string suffix;
  std::vector<std::string> comments;
  CsvTable table;
};

CsvTable fig1_table(const RunConfig& config);
CsvTable fig2_table(const RunConfig& config);
CsvTable fig3_table(const RunConfig& config, const PriorDensity& prior);
CsvTable fig4_table(const RunConfig& config, const PriorDensity& prior);
CsvTable bounds_table(const RunConfig& config);

const std::vector<std::string>& command_names();

/// Runs a validated config. Throws the library's exceptions unchanged.
std::vector<CommandOutput> run_command(const std::string& command, const RunConfig& config);

/// `<stem><suffix><ext>` next to `path`.
std::string output_path_for(const std::string& path, const std::string& suffix);

// Full command line: parsing, PHASEBOUND_THREADS, computation, output.
// Returns the process exit code: 0 ok, 2 config, 3 numerical, 4 hierarchy.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace phasebound::cli

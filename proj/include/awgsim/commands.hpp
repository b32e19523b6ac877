#pragma once

#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "awgsim/csv.hpp"
#include "awgsim/experiment.hpp"

namespace awgsim {

enum ExitCode : int {
    exit_ok = 0,
    exit_failure = 1,
    exit_config_error = 2,
    exit_model_error = 3,
};

/// Named CSV documents produced by a command, in emission order.
struct CommandOutput {
    std::vector<std::pair<std::string, std::string>> files;  // file name, content
};

/// `# awgsim <command> config_hash=<16 hex> seed=<u64>`
std::string provenance(const std::string& command, const ExperimentConfig& config);

CsvTable analytic_table(const ExperimentConfig& config);
CsvTable estimate_table(const ExperimentConfig& config, const std::vector<BpEstimate>& estimates);
CsvTable deviation_table(const ExperimentConfig& config, const std::vector<Deviation>& deviations);
CsvTable crosslayer_table(const ExperimentConfig& config, const CrossLayerReport& report);

/// analytic.csv: one row per (F, load); F = 1 and F = 2 use their own
/// chains, larger F the single-coupler approximation.
CommandOutput cmd_analyze(const ExperimentConfig& config);
/// estimates.csv and deviations.csv.
CommandOutput cmd_simulate(const ExperimentConfig& config);
/// crosslayer.csv.
CommandOutput cmd_crosslayer(const ExperimentConfig& config);
/// All of the above; the Monte Carlo grid is simulated once.
CommandOutput cmd_sweep(const ExperimentConfig& config);

/// Writes every file under `dir`, creating it if needed.
void write_outputs(const CommandOutput& output, const std::string& dir);

/// Maps an in-flight exception to an exit code and a one-line message.
std::pair<ExitCode, std::string> classify_error(std::exception_ptr e);

} // namespace awgsim

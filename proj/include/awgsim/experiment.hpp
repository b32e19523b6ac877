#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "awgsim/montecarlo.hpp"
#include "awgsim/physical.hpp"

namespace awgsim {

/// Config problem with the 1-based line it was found on (0 when unknown).
class ConfigValidationError : public ConfigError {
public:
    ConfigValidationError(const std::string& source, int line, const std::string& message);
    int line() const noexcept { return line_; }

private:
    int line_;
};

struct BerModelConfig {
    std::string type = "synthetic";  // synthetic | table
    std::map<int, SyntheticBerModel::Coefficients> coefficients = SyntheticBerModel::shipped_coefficients();
    std::string table_path;  // resolved against the config file's directory
};

/// Everything one invocation needs. Defaults reproduce the reference setup:
/// N_W = 64, K = 64, F in {1, 2, 4, 8}, 10,000 runs, R_inter = 0.25,
/// 28 Gbaud, loads 0.1..1.0.
struct ExperimentConfig {
    SimulationPlan plan;
    BerModelConfig ber_model;
    std::vector<int> modulations{2, 4, 8};
    double symbol_rate_gbaud = kDefaultSymbolRateGbaud;
    double tolerance = 0.05;
    std::string output_dir = "out";

    /// Overwrites run count, F list, K, N_W, symbol rate and R_inter with the
    /// reference values; other settings are left alone.
    void apply_reference_defaults();

    /// Throws ConfigValidationError (line 0) on the first violated constraint.
    void validate() const;

    /// Full settings as JSON, in the same layout parse_config accepts.
    std::string to_json() const;

    /// Hash of every setting that can change results; thread count and
    /// output directory are excluded.
    std::uint64_t hash() const;

    std::unique_ptr<BerModel> make_ber_model() const;
    std::vector<ModulationOrder> modulation_orders() const;
};

/// Parses and validates JSON text. Errors carry the line of the offending
/// key. `base_dir` anchors relative table paths.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>",
                              const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

/// Applies AWGSIM_SEED, AWGSIM_RUNS, AWGSIM_THREADS, AWGSIM_OUT,
/// AWGSIM_WAVELENGTH_POLICY and AWGSIM_PHYSICAL_OCCUPANCY when set.
using EnvLookup = std::function<const char*(const char*)>;
void apply_env_overrides(ExperimentConfig& config, const EnvLookup& lookup);

std::string to_string(StartPolicy p);
std::string to_string(WavelengthPolicy p);
StartPolicy parse_start_policy(const std::string& s);  // throws ConfigError
WavelengthPolicy parse_wavelength_policy(const std::string& s);

} // namespace awgsim

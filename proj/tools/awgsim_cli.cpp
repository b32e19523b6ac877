// awgsim: analytic and Monte Carlo blocking, cross-layer throughput.
//
//   awgsim analyze    [options]   analytic.csv
//   awgsim simulate   [options]   estimates.csv, deviations.csv
//   awgsim crosslayer [options]   crosslayer.csv
//   awgsim sweep      [options]   all of the above
//
// Settings are layered: built-in defaults, --config file, --paper-defaults,
// AWGSIM_* environment variables, then command-line flags.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "awgsim/commands.hpp"

namespace {

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> runs;
    std::optional<int> threads;
    std::optional<std::string> out;
    std::optional<std::string> wavelength_policy;
    bool reference_defaults = false;
    bool physical_occupancy = false;
    bool print_config = false;
    bool quiet = false;
};

void add_options(CLI::App& cmd, Options& o)
{
    cmd.add_option("--config", o.config_path, "JSON experiment configuration")->check(CLI::ExistingFile);
    cmd.add_option("--seed", o.seed, "master seed (unsigned 64-bit)");
    cmd.add_option("--runs", o.runs, "Monte Carlo cycles per grid point")->check(CLI::PositiveNumber);
    cmd.add_option("--threads", o.threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
    cmd.add_option("--out", o.out, "output directory");
    cmd.add_flag("--paper-defaults", o.reference_defaults,
                 "runs=10000, F={1,2,4,8}, K=64, N_W=64, 28 Gbaud, R_inter=0.25");
    cmd.add_flag("--physical-occupancy", o.physical_occupancy,
                 "also block a coupler's outgoing interdomain wavelengths for its intradomain traffic");
    cmd.add_option("--wavelength-policy", o.wavelength_policy, "intradomain wavelength choice")
        ->check(CLI::IsMember({"random", "first-fit", "first_fit"}));
    cmd.add_flag("--print-config", o.print_config, "write the effective configuration to stdout and exit");
    cmd.add_flag("-q,--quiet", o.quiet, "no progress messages");
}

awgsim::ExperimentConfig build_config(const Options& o)
{
    awgsim::ExperimentConfig c = o.config_path.empty() ? awgsim::ExperimentConfig{} : awgsim::load_config(o.config_path);
    if (o.reference_defaults)
        c.apply_reference_defaults();
    awgsim::apply_env_overrides(c, [](const char* name) -> const char* { return std::getenv(name); });
    if (o.seed)
        c.plan.master_seed = *o.seed;
    if (o.runs)
        c.plan.runs = *o.runs;
    if (o.threads)
        c.plan.threads = *o.threads;
    if (o.out)
        c.output_dir = *o.out;
    if (o.physical_occupancy)
        c.plan.policy.physical_occupancy = true;
    if (o.wavelength_policy)
        c.plan.policy.intra_wavelength = awgsim::parse_wavelength_policy(*o.wavelength_policy);
    c.validate();
    return c;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"AWG multi-FSR multicast switch: blocking and cross-layer throughput"};
    app.require_subcommand(1);

    Options opts;
    std::string chosen;
    const std::pair<const char*, const char*> commands[] = {
        {"analyze", "analytic blocking curves"},
        {"simulate", "Monte Carlo blocking estimates and deviations from the analytic model"},
        {"crosslayer", "pre-FEC BER, RS code selection and interdomain throughput"},
        {"sweep", "analyze, simulate and crosslayer on one Monte Carlo grid"},
    };
    for (const auto& [name, help] : commands) {
        auto* cmd = app.add_subcommand(name, help);
        add_options(*cmd, opts);
        cmd->callback([&chosen, n = name] { chosen = n; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? awgsim::exit_ok : awgsim::exit_config_error;
    }

    try {
        const auto config = build_config(opts);
        if (opts.print_config) {
            std::cout << config.to_json();
            return awgsim::exit_ok;
        }

        awgsim::CommandOutput output;
        if (chosen == "analyze")
            output = awgsim::cmd_analyze(config);
        else if (chosen == "simulate")
            output = awgsim::cmd_simulate(config);
        else if (chosen == "crosslayer")
            output = awgsim::cmd_crosslayer(config);
        else
            output = awgsim::cmd_sweep(config);

        awgsim::write_outputs(output, config.output_dir);
        if (!opts.quiet) {
            for (const auto& [name, _] : output.files)
                std::fprintf(stderr, "wrote %s/%s\n", config.output_dir.c_str(), name.c_str());
        }
        return awgsim::exit_ok;
    } catch (...) {
        const auto [code, message] = awgsim::classify_error(std::current_exception());
        std::fprintf(stderr, "awgsim: %s\n", message.c_str());
        return code;
    }
}

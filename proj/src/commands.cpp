#include "awgsim/commands.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace awgsim {

namespace {

const char* kind_name(TrafficKind k)
{
    return k == TrafficKind::interdomain ? "interdomain" : "intradomain";
}

const char* chain_name(int fsr_count)
{
    if (fsr_count == 1)
        return "f1";
    if (fsr_count == 2)
        return "f2";
    return "single_coupler";
}

void add_counters(CsvTable& t, const ClassCounters& c)
{
    t.add(c.requests).add(c.granted).add(c.wavelength_shortage).add(c.receiver_busy).add(c.receiver_contention);
}

CommandOutput simulate_outputs(const ExperimentConfig& config, const std::vector<BpEstimate>& estimates)
{
    const auto analytic = analytic_points(config.plan);
    const auto deviations = compare_with_analytics(estimates, analytic, config.tolerance);
    CommandOutput out;
    out.files.emplace_back("estimates.csv", estimate_table(config, estimates).str());
    out.files.emplace_back("deviations.csv", deviation_table(config, deviations).str());
    return out;
}

void check_config(const ExperimentConfig& config)
{
    config.validate();
}

} // namespace

std::string provenance(const std::string& command, const ExperimentConfig& config)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, "awgsim %s config_hash=%016" PRIx64 " seed=%" PRIu64, command.c_str(),
                  config.hash(), config.plan.master_seed);
    return buf;
}

CsvTable analytic_table(const ExperimentConfig& config)
{
    CsvTable t(provenance("analyze", config),
               {"chain", "fsr_count", "awg_ports", "load", "m1", "b1", "b2", "b3", "b4", "b5", "b6_busy",
                "b6_contention", "b_inter", "b_inter_product", "inter_saturated", "b_l1", "b_l2", "b_intra",
                "intra_saturated"});
    for (const auto& p : analytic_points(config.plan)) {
        const auto& b = p.breakdown;
        const bool two = p.fsr_count == 2;
        const bool chain = p.fsr_count <= 2;
        t.row().add(chain_name(p.fsr_count)).add(p.fsr_count).add(config.plan.wavelength_count / p.fsr_count)
            .add(p.load).add(b.m1);
        if (chain)
            t.add(b.b1).add(b.b2).add(b.b3);
        else
            t.add("").add("").add("");
        if (two)
            t.add(b.b4).add(b.b5).add(b.b6_busy).add(b.b6_contention);
        else
            t.add("").add("").add("").add("");
        t.add(b.b_inter);
        if (two)
            t.add(b.b_inter_product);
        else
            t.add("");
        t.add(b.inter_saturated).add(b.b_l1).add(b.b_l2).add(b.b_intra).add(b.intra_saturated);
    }
    return t;
}

CsvTable estimate_table(const ExperimentConfig& config, const std::vector<BpEstimate>& estimates)
{
    CsvTable t(provenance("simulate", config),
               {"fsr_count", "awg_ports", "load", "runs", "b_inter", "se_inter", "inter_requests", "inter_granted",
                "inter_wavelength_shortage", "inter_receiver_busy", "inter_receiver_contention", "b_intra",
                "se_intra", "intra_requests", "intra_granted", "intra_wavelength_shortage", "intra_receiver_busy",
                "intra_receiver_contention"});
    for (const auto& e : estimates) {
        t.row().add(e.fsr_count).add(e.awg_ports).add(e.load).add(e.runs).add(e.b_inter).add(e.se_inter);
        add_counters(t, e.inter);
        t.add(e.b_intra).add(e.se_intra);
        add_counters(t, e.intra);
    }
    return t;
}

CsvTable deviation_table(const ExperimentConfig& config, const std::vector<Deviation>& deviations)
{
    CsvTable t(provenance("simulate", config),
               {"fsr_count", "load", "class", "analytic", "simulated", "abs_dev", "rel_dev", "exceeds"});
    for (const auto& d : deviations)
        t.row().add(d.fsr_count).add(d.load).add(kind_name(d.kind)).add(d.analytic).add(d.simulated)
            .add(d.abs_dev).add(d.rel_dev).add(d.exceeds);
    return t;
}

CsvTable crosslayer_table(const ExperimentConfig& config, const CrossLayerReport& report)
{
    CsvTable t(provenance("crosslayer", config),
               {"fsr_count", "awg_ports", "modulation", "load", "pre_fec_ber", "code_rate", "k",
                "effective_bit_rate_gbps", "granted_per_cycle", "t_inter_gbps"});
    for (const auto& p : report.points)
        t.row().add(p.fsr_count).add(p.awg_ports).add(p.modulation).add(p.load).add(p.mean_pre_fec_ber)
            .add(p.mean_code_rate).add(p.k).add(p.mean_effective_bit_rate).add(p.granted_per_cycle).add(p.t_inter);
    return t;
}

CommandOutput cmd_analyze(const ExperimentConfig& config)
{
    check_config(config);
    CommandOutput out;
    out.files.emplace_back("analytic.csv", analytic_table(config).str());
    return out;
}

CommandOutput cmd_simulate(const ExperimentConfig& config)
{
    check_config(config);
    return simulate_outputs(config, estimate(config.plan));
}

CommandOutput cmd_crosslayer(const ExperimentConfig& config)
{
    check_config(config);
    const auto model = config.make_ber_model();
    const auto report = evaluate_crosslayer(config.plan, *model, config.modulation_orders(), config.symbol_rate_gbaud);
    CommandOutput out;
    out.files.emplace_back("crosslayer.csv", crosslayer_table(config, report).str());
    return out;
}

CommandOutput cmd_sweep(const ExperimentConfig& config)
{
    check_config(config);
    const auto model = config.make_ber_model();
    const auto modulations = config.modulation_orders();
    if (!(config.plan.r_inter > 0.0))
        throw ConfigError("interdomain throughput needs r_inter > 0");

    const auto grid = simulate_grid(config.plan);
    CommandOutput out = cmd_analyze(config);
    for (auto& f : simulate_outputs(config, estimate(config.plan, grid)).files)
        out.files.push_back(std::move(f));
    const auto report = evaluate_crosslayer(config.plan, grid, *model, modulations, config.symbol_rate_gbaud);
    out.files.emplace_back("crosslayer.csv", crosslayer_table(config, report).str());
    return out;
}

void write_outputs(const CommandOutput& output, const std::string& dir)
{
    std::filesystem::create_directories(dir);
    for (const auto& [name, content] : output.files) {
        const auto path = std::filesystem::path(dir) / name;
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        f << content;
        if (!f)
            throw std::runtime_error("cannot write " + path.string());
    }
}

std::pair<ExitCode, std::string> classify_error(std::exception_ptr e)
{
    try {
        std::rethrow_exception(e);
    } catch (const ConfigError& x) {
        return {exit_config_error, std::string("configuration error: ") + x.what()};
    } catch (const ModelError& x) {
        return {exit_model_error, std::string("model error: ") + x.what()};
    } catch (const std::exception& x) {
        return {exit_failure, std::string("error: ") + x.what()};
    } catch (...) {
        return {exit_failure, "error: unknown exception"};
    }
}

} // namespace awgsim

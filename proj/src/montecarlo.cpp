#include "awgsim/montecarlo.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace awgsim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::optional<double> pooled_ratio(const ClassCounters& c)
{
    if (c.requests == 0)
        return std::nullopt;
    return static_cast<double>(c.blocked()) / static_cast<double>(c.requests);
}

template <class Select>
std::optional<double> standard_error(const std::vector<RunRecord>& records, Select select)
{
    double sum = 0;
    double sum_sq = 0;
    std::int64_t n = 0;
    for (const auto& r : records) {
        const ClassCounters& c = select(r);
        if (c.requests == 0)
            continue;
        const double ratio = static_cast<double>(c.blocked()) / static_cast<double>(c.requests);
        sum += ratio;
        sum_sq += ratio * ratio;
        ++n;
    }
    if (n < 2)
        return std::nullopt;
    const double mean = sum / static_cast<double>(n);
    const double var = std::max(0.0, (sum_sq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1));
    return std::sqrt(var / static_cast<double>(n));
}

} // namespace

void SimulationPlan::validate() const
{
    if (wavelength_count < 1)
        throw ConfigError("wavelength_count must be positive");
    if (coupler_ports < 2)
        throw ConfigError("coupler_ports must be at least 2");
    if (fsr_list.empty())
        throw ConfigError("fsr_list is empty");
    for (int f : fsr_list) {
        if (f < 1 || wavelength_count % f != 0)
            throw ConfigError("FSR count " + std::to_string(f) + " does not divide wavelength_count "
                              + std::to_string(wavelength_count));
        if (wavelength_count / f < 2)
            throw ConfigError("FSR count " + std::to_string(f) + " leaves fewer than two AWG ports");
    }
    for (double load : loads) {
        if (!(load >= 0.0 && load <= 1.0))
            throw ConfigError("load " + std::to_string(load) + " outside [0, 1]");
    }
    if (!(r_inter >= 0.0 && r_inter <= 1.0))
        throw ConfigError("r_inter outside [0, 1]");
    if (coupler_ports == 2 && r_inter < 1.0)
        throw ConfigError("coupler_ports = 2 leaves no intradomain destination; set r_inter = 1");
    if (runs < 1)
        throw ConfigError("runs must be at least 1");
    if (threads < 0)
        throw ConfigError("threads must be nonnegative");
}

SwitchConfig SimulationPlan::switch_config(int fsr_count) const
{
    return SwitchConfig::from_wavelengths(wavelength_count, coupler_ports, fsr_count);
}

std::uint64_t run_seed(std::uint64_t master_seed, int fsr_count, int load_index, int run_index)
{
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ static_cast<std::uint64_t>(fsr_count));
    h = splitmix64(h ^ static_cast<std::uint64_t>(load_index));
    return splitmix64(h ^ static_cast<std::uint64_t>(run_index));
}

RoundRobinPointers run_pointers(const SwitchConfig& config, int run_index)
{
    return {run_index % config.awg_ports(), run_index % config.nodes_per_coupler()};
}

std::vector<RunRecord> simulate_point(const SimulationPlan& plan, int fsr_count, int load_index)
{
    const auto config = plan.switch_config(fsr_count);
    const double load = plan.loads.at(static_cast<std::size_t>(load_index));
    std::vector<RunRecord> records(static_cast<std::size_t>(plan.runs));

    parallel_chunks(plan.runs, plan.threads, [&](int begin, int end) {
        auto policy = plan.policy;
        policy.record_trace = false;
        Scheduler scheduler(config, policy);
        for (int run = begin; run < end; ++run) {
            Rng rng(run_seed(plan.master_seed, fsr_count, load_index, run));
            const auto batch = generate_batch(config, load, plan.r_inter, rng);
            const auto outcome = scheduler.schedule(batch, rng, run_pointers(config, run));
            records[static_cast<std::size_t>(run)] = {outcome.inter, outcome.intra};
        }
    });
    return records;
}

BpEstimate summarize(int fsr_count, int awg_ports, double load, const std::vector<RunRecord>& records)
{
    BpEstimate e;
    e.fsr_count = fsr_count;
    e.awg_ports = awg_ports;
    e.load = load;
    e.runs = static_cast<int>(records.size());
    for (const auto& r : records) {
        e.inter += r.inter;
        e.intra += r.intra;
    }
    e.b_inter = pooled_ratio(e.inter);
    e.b_intra = pooled_ratio(e.intra);
    e.se_inter = standard_error(records, [](const RunRecord& r) -> const ClassCounters& { return r.inter; });
    e.se_intra = standard_error(records, [](const RunRecord& r) -> const ClassCounters& { return r.intra; });
    return e;
}

std::vector<PointRecords> simulate_grid(const SimulationPlan& plan)
{
    plan.validate();
    std::vector<PointRecords> out;
    out.reserve(plan.fsr_list.size() * plan.loads.size());
    for (int f : plan.fsr_list) {
        for (std::size_t li = 0; li < plan.loads.size(); ++li)
            out.push_back({f, static_cast<int>(li), simulate_point(plan, f, static_cast<int>(li))});
    }
    return out;
}

std::vector<BpEstimate> estimate(const SimulationPlan& plan)
{
    return estimate(plan, simulate_grid(plan));
}

std::vector<BpEstimate> estimate(const SimulationPlan& plan, const std::vector<PointRecords>& grid)
{
    std::vector<BpEstimate> out;
    out.reserve(grid.size());
    for (const auto& p : grid) {
        const double load = plan.loads.at(static_cast<std::size_t>(p.load_index));
        out.push_back(summarize(p.fsr_count, plan.wavelength_count / p.fsr_count, load, p.records));
    }
    return out;
}

std::vector<AnalyticPoint> analytic_points(const SimulationPlan& plan)
{
    plan.validate();
    std::vector<AnalyticPoint> out;
    for (int f : plan.fsr_list) {
        for (double load : plan.loads) {
            const AnalyticInput in{plan.wavelength_count / f, plan.coupler_ports, load, plan.r_inter};
            out.push_back({f, load, analytic_breakdown(in, f)});
        }
    }
    return out;
}

std::vector<Deviation> compare_with_analytics(const std::vector<BpEstimate>& estimates,
                                              const std::vector<AnalyticPoint>& analytic, double tolerance)
{
    if (estimates.size() != analytic.size())
        throw std::invalid_argument("estimate and analytic grids differ in size");

    std::vector<Deviation> out;
    out.reserve(estimates.size() * 2);
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        const auto& e = estimates[i];
        const auto& a = analytic[i];
        if (e.fsr_count != a.fsr_count || e.load != a.load)
            throw std::invalid_argument("estimate and analytic grids differ at row " + std::to_string(i));

        auto row = [&](TrafficKind kind, double model, std::optional<double> sim) {
            Deviation d;
            d.fsr_count = e.fsr_count;
            d.load = e.load;
            d.kind = kind;
            d.analytic = model;
            d.simulated = sim;
            if (sim) {
                d.abs_dev = std::abs(*sim - model);
                if (model > 0)
                    d.rel_dev = *d.abs_dev / model;
                d.exceeds = *d.abs_dev > tolerance;
            }
            out.push_back(d);
        };
        row(TrafficKind::interdomain, a.breakdown.b_inter, e.b_inter);
        row(TrafficKind::intradomain, a.breakdown.b_intra, e.b_intra);
    }
    return out;
}

} // namespace awgsim

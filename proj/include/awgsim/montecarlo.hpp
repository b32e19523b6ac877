#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "awgsim/analytics.hpp"
#include "awgsim/scheduler.hpp"
#include "awgsim/topology.hpp"

namespace awgsim {

/// Monte Carlo sweep over FSR counts and loads at a fixed wavelength budget;
/// each FSR count F uses N = N_W / F AWG ports.
struct SimulationPlan {
    int wavelength_count = 64;
    int coupler_ports = 64;
    std::vector<int> fsr_list{1, 2, 4, 8};
    std::vector<double> loads{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    double r_inter = 0.25;
    int runs = 10000;
    std::uint64_t master_seed = 1;
    SchedulerPolicy policy;
    int threads = 0;  // 0: one per hardware thread

    /// Throws ConfigError naming the first violated constraint.
    void validate() const;
    SwitchConfig switch_config(int fsr_count) const;
};

/// Per-cycle request and decision counts.
struct RunRecord {
    ClassCounters inter;
    ClassCounters intra;
};

struct BpEstimate {
    int fsr_count = 1;
    int awg_ports = 0;
    double load = 0;
    int runs = 0;
    // Pooled ratio blocked / offered; empty when no request of the class was
    // offered in any run.
    std::optional<double> b_inter;
    std::optional<double> b_intra;
    // Standard error of the per-run ratios; empty with fewer than two runs
    // that carried the class.
    std::optional<double> se_inter;
    std::optional<double> se_intra;
    ClassCounters inter;
    ClassCounters intra;
};

/// Counter-based seed for one cycle: splitmix64 chained over
/// (master seed, F, load index, run index). Independent of thread layout.
std::uint64_t run_seed(std::uint64_t master_seed, int fsr_count, int load_index, int run_index);

/// Round-robin positions of cycle `run_index` for a scheduler whose pointers
/// start at zero and advance once per cycle.
RoundRobinPointers run_pointers(const SwitchConfig& config, int run_index);

/// Executes `runs` cycles of one (F, load) point. Record r is produced by
/// cycle r alone, so the vector is identical for any thread count.
std::vector<RunRecord> simulate_point(const SimulationPlan& plan, int fsr_count, int load_index);

/// Aggregates run records into an estimate (order-independent sums).
BpEstimate summarize(int fsr_count, int awg_ports, double load, const std::vector<RunRecord>& records);

/// Run records of one grid point.
struct PointRecords {
    int fsr_count = 1;
    int load_index = 0;
    std::vector<RunRecord> records;
};

/// simulate_point for every (F, load), F-major in plan order.
std::vector<PointRecords> simulate_grid(const SimulationPlan& plan);

/// One estimate per (F, load), F-major in plan order.
std::vector<BpEstimate> estimate(const SimulationPlan& plan);
std::vector<BpEstimate> estimate(const SimulationPlan& plan, const std::vector<PointRecords>& grid);

/// Analytic counterpart of one estimate.
struct AnalyticPoint {
    int fsr_count = 1;
    double load = 0;
    BpBreakdown breakdown;
};

/// Analytic breakdowns on the plan's (F, load) grid; see analytic_breakdown.
std::vector<AnalyticPoint> analytic_points(const SimulationPlan& plan);

struct Deviation {
    int fsr_count = 1;
    double load = 0;
    TrafficKind kind = TrafficKind::interdomain;
    double analytic = 0;
    std::optional<double> simulated;
    std::optional<double> abs_dev;
    std::optional<double> rel_dev;  // empty when the analytic value is zero
    bool exceeds = false;
};

/// Row-per-(F, load, class) deviation table. Throws std::invalid_argument
/// unless both inputs cover the same (F, load) grid in the same order.
std::vector<Deviation> compare_with_analytics(const std::vector<BpEstimate>& estimates,
                                              const std::vector<AnalyticPoint>& analytic, double tolerance);

/// Splits [0, count) into contiguous chunks and runs fn(begin, end) for
/// each on up to `threads` workers (0: hardware concurrency). fn must only
/// write state owned by indices in its chunk.
template <class Fn>
void parallel_chunks(int count, int threads, Fn&& fn)
{
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min(workers, count));
    if (workers == 1) {
        if (count > 0)
            fn(0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int t = 0; t < workers; ++t) {
        const int begin = static_cast<int>(static_cast<long long>(count) * t / workers);
        const int end = static_cast<int>(static_cast<long long>(count) * (t + 1) / workers);
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& th : pool)
        th.join();
}

} // namespace awgsim

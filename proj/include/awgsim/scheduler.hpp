#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "awgsim/topology.hpp"
#include "awgsim/traffic.hpp"

namespace awgsim {

enum class BlockReason { wavelength_shortage, receiver_busy, receiver_contention };

enum class DecisionStatus { pending, granted, blocked };

/// Where the destination-coupler (interdomain) and destination-node
/// (intradomain) sweeps start.
enum class StartPolicy { round_robin, random };

enum class WavelengthPolicy { random, first_fit };

struct SchedulerPolicy {
    StartPolicy start = StartPolicy::round_robin;
    WavelengthPolicy intra_wavelength = WavelengthPolicy::random;
    /// Also count a coupler's outgoing interdomain wavelengths as used inside
    /// that coupler, which removes them from its intradomain pool.
    bool physical_occupancy = false;
    /// First pass draws from the w1/w2 halves. When false the first pass uses
    /// the full link set, which is what F = 1 always does.
    bool partitioned_first_pass = true;
    /// Retry pass over the full link set for first-pass wavelength blocks.
    /// Only meaningful for F >= 2.
    bool retry_pass = true;
    bool record_trace = false;
};

/// Zero-based round-robin start positions for one cycle.
struct RoundRobinPointers {
    int inter_start = 0;
    int intra_start = 0;
};

struct Decision {
    DecisionStatus status = DecisionStatus::pending;
    WavelengthId wavelength{0};
    BlockReason reason = BlockReason::wavelength_shortage;

    bool granted() const noexcept { return status == DecisionStatus::granted; }
    bool blocked() const noexcept { return status == DecisionStatus::blocked; }
};

struct ClassCounters {
    std::int64_t requests = 0;
    std::int64_t granted = 0;
    std::int64_t wavelength_shortage = 0;
    std::int64_t receiver_busy = 0;
    std::int64_t receiver_contention = 0;

    std::int64_t blocked() const noexcept { return wavelength_shortage + receiver_busy + receiver_contention; }
    void record(const Decision& d) noexcept;
    ClassCounters& operator+=(const ClassCounters& o) noexcept;

    friend bool operator==(const ClassCounters&, const ClassCounters&) = default;
};

enum class SchedulePhase { inter_first_pass, inter_retry_pass, intra };

enum class TraceAction { granted, blocked, restored };

/// One scheduler action, in execution order.
struct TraceEvent {
    SchedulePhase phase;
    int request;  // index into the batch
    TraceAction action;
    WavelengthId wavelength{0};
    BlockReason reason = BlockReason::wavelength_shortage;
};

struct ScheduleOutcome {
    std::vector<Decision> decisions;  // parallel to RequestBatch::requests
    ClassCounters inter;
    ClassCounters intra;
    std::vector<TraceEvent> trace;  // empty unless SchedulerPolicy::record_trace
};

/// Per-coupler wavelength usage plus receiver flags.
///
/// `incoming` is the destination-side set: wavelengths entering a coupler from
/// the AWG or used by intradomain connections. `outgoing` holds wavelengths a
/// coupler's transmitters send into the AWG. A wavelength of L(s,d) is free
/// iff it is in neither set of coupler d; the outgoing test is what keeps
/// L(s,d) and L(d,s) from sharing a wavelength.
class OccupancyState {
public:
    explicit OccupancyState(const SwitchConfig& config);

    void reset();

    bool link_available(int src_coupler, int dst_coupler, int wavelength) const noexcept
    {
        (void)src_coupler;
        const auto i = slot(dst_coupler, wavelength);
        return !incoming_[i] && !outgoing_[i];
    }

    bool coupler_available(int coupler, int wavelength, bool physical_occupancy) const noexcept
    {
        const auto i = slot(coupler, wavelength);
        return !incoming_[i] && !(physical_occupancy && outgoing_[i]);
    }

    bool receiver_busy(int node) const noexcept { return busy_[static_cast<std::size_t>(node)] != 0; }

    void grant_interdomain(int src_coupler, int dst_coupler, int wavelength, int dst_node);
    void grant_intradomain(int coupler, int wavelength, int dst_node);

    /// Destination-side set of a coupler (1-based ids), with the coupler's
    /// outgoing wavelengths merged in when `physical_occupancy` is set.
    std::vector<WavelengthId> used_wavelengths(int coupler, bool physical_occupancy = false) const;

    int wavelength_count() const noexcept { return wavelengths_; }

private:
    std::size_t slot(int coupler, int wavelength) const noexcept
    {
        return static_cast<std::size_t>(coupler) * wavelengths_ + wavelength;
    }

    int wavelengths_;
    std::vector<char> incoming_;
    std::vector<char> outgoing_;
    std::vector<char> busy_;
};

/// Two-phase multi-FSR scheduler. Holds the routing table and scratch
/// buffers so repeated cycles do not reallocate; one instance per thread.
///
/// All coupler, node and wavelength arguments of the internals are 0-based;
/// the public results use the 1-based ids from topology.hpp.
///
/// Random draw order within a cycle (each draw is skipped when only one
/// candidate exists): interdomain start coupler (random start only); then
/// per first-pass decision the destination tie-break, the source, the
/// wavelength; the same for the retry pass; then intradomain per coupler in
/// index order: start node (random start only), and per decision the source
/// and the wavelength (random policy only).
class Scheduler {
public:
    explicit Scheduler(SwitchConfig config, SchedulerPolicy policy = {});

    /// Schedules one cycle from the internal round-robin pointers, then
    /// advances them by one.
    ScheduleOutcome schedule(const RequestBatch& batch, Rng& rng);

    /// Schedules one cycle from explicit pointers; internal pointers untouched.
    ScheduleOutcome schedule(const RequestBatch& batch, Rng& rng, RoundRobinPointers pointers);

    /// Interdomain phase only; intradomain decisions stay pending.
    ScheduleOutcome schedule_interdomain(const RequestBatch& batch, OccupancyState& state, Rng& rng,
                                         int start_coupler = 0);

    /// Intradomain phase only, on a state the interdomain phase already
    /// touched. Interdomain decisions stay pending.
    ScheduleOutcome schedule_intradomain(const RequestBatch& batch, OccupancyState& state, Rng& rng,
                                         int start_node = 0);

    const SwitchConfig& config() const noexcept { return config_; }
    const SchedulerPolicy& policy() const noexcept { return policy_; }
    RoundRobinPointers pointers() const noexcept { return pointers_; }
    void set_pointers(RoundRobinPointers p) noexcept { pointers_ = p; }

private:
    enum class WavelengthRule { lower_or_upper_half, full_set };

    void collect(const RequestBatch& batch, TrafficKind kind);
    void fill_buckets(const RequestBatch& batch);
    void run_inter_pass(const RequestBatch& batch, OccupancyState& state, Rng& rng, int start_coupler,
                        WavelengthRule rule, SchedulePhase phase, bool collect_shortage, ScheduleOutcome& out);
    void run_interdomain(const RequestBatch& batch, OccupancyState& state, Rng& rng, int start_coupler,
                         ScheduleOutcome& out);
    void run_intradomain(const RequestBatch& batch, OccupancyState& state, Rng& rng, int start_node,
                         ScheduleOutcome& out);
    ScheduleOutcome fresh_outcome(const RequestBatch& batch) const;
    void finish(const RequestBatch& batch, ScheduleOutcome& out) const;
    void decide(ScheduleOutcome& out, SchedulePhase phase, int request, DecisionStatus status, int wavelength,
                BlockReason reason);

    SwitchConfig config_;
    SchedulerPolicy policy_;
    RoutingTable table_;
    RoundRobinPointers pointers_;
    OccupancyState state_;

    // Pending requests grouped by destination node: node v owns
    // slots_[offset_[v] .. offset_[v] + pending_[v]).
    std::vector<int> offset_;
    std::vector<int> pending_;
    std::vector<int> slots_;
    std::vector<int> shortage_;  // first-pass wavelength blocks awaiting retry
    std::vector<int> ties_;
    std::vector<int> work_;  // request indices handed to the next pass
};

/// Convenience wrapper: fresh scheduler, engine seeded with `seed`, pointers
/// at zero.
ScheduleOutcome schedule(const SwitchConfig& config, const RequestBatch& batch, std::uint64_t seed,
                         const SchedulerPolicy& policy = {});

const char* to_string(BlockReason reason) noexcept;
const char* to_string(SchedulePhase phase) noexcept;

/// Decision trace as CSV lines:
/// `phase,request,src_coupler,src_idx,dst_coupler,dst_idx,action,wavelength,reason`.
void write_trace(std::ostream& out, const RequestBatch& batch, const ScheduleOutcome& outcome);

} // namespace awgsim

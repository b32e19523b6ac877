#include "awgsim/scheduler.hpp"

#include <algorithm>
#include <climits>
#include <ostream>

namespace awgsim {

void ClassCounters::record(const Decision& d) noexcept
{
    ++requests;
    if (d.granted()) {
        ++granted;
        return;
    }
    if (!d.blocked())
        return;
    switch (d.reason) {
    case BlockReason::wavelength_shortage: ++wavelength_shortage; break;
    case BlockReason::receiver_busy: ++receiver_busy; break;
    case BlockReason::receiver_contention: ++receiver_contention; break;
    }
}

ClassCounters& ClassCounters::operator+=(const ClassCounters& o) noexcept
{
    requests += o.requests;
    granted += o.granted;
    wavelength_shortage += o.wavelength_shortage;
    receiver_busy += o.receiver_busy;
    receiver_contention += o.receiver_contention;
    return *this;
}

OccupancyState::OccupancyState(const SwitchConfig& config)
    : wavelengths_(config.wavelength_count()),
      incoming_(static_cast<std::size_t>(config.awg_ports()) * wavelengths_, 0),
      outgoing_(incoming_.size(), 0),
      busy_(static_cast<std::size_t>(config.node_count()), 0)
{
}

void OccupancyState::reset()
{
    std::fill(incoming_.begin(), incoming_.end(), 0);
    std::fill(outgoing_.begin(), outgoing_.end(), 0);
    std::fill(busy_.begin(), busy_.end(), 0);
}

void OccupancyState::grant_interdomain(int src_coupler, int dst_coupler, int wavelength, int dst_node)
{
    incoming_[slot(dst_coupler, wavelength)] = 1;
    outgoing_[slot(src_coupler, wavelength)] = 1;
    busy_[static_cast<std::size_t>(dst_node)] = 1;
}

void OccupancyState::grant_intradomain(int coupler, int wavelength, int dst_node)
{
    incoming_[slot(coupler, wavelength)] = 1;
    busy_[static_cast<std::size_t>(dst_node)] = 1;
}

std::vector<WavelengthId> OccupancyState::used_wavelengths(int coupler, bool physical_occupancy) const
{
    std::vector<WavelengthId> out;
    for (int w = 0; w < wavelengths_; ++w) {
        if (!coupler_available(coupler, w, physical_occupancy))
            out.push_back(WavelengthId{w + 1});
    }
    return out;
}

namespace {

int draw(Rng& rng, int n)
{
    if (n <= 1)
        return 0;
    return std::uniform_int_distribution<int>(0, n - 1)(rng);
}

} // namespace

Scheduler::Scheduler(SwitchConfig config, SchedulerPolicy policy)
    : config_(config), policy_(policy), table_(config), state_(config),
      offset_(static_cast<std::size_t>(config.node_count()) + 1, 0),
      pending_(static_cast<std::size_t>(config.node_count()), 0)
{
}

ScheduleOutcome Scheduler::fresh_outcome(const RequestBatch& batch) const
{
    ScheduleOutcome out;
    out.decisions.resize(batch.requests.size());
    return out;
}

void Scheduler::finish(const RequestBatch& batch, ScheduleOutcome& out) const
{
    out.inter = {};
    out.intra = {};
    for (std::size_t r = 0; r < batch.requests.size(); ++r) {
        const auto& d = out.decisions[r];
        if (d.status == DecisionStatus::pending)
            continue;
        (batch.requests[r].kind == TrafficKind::interdomain ? out.inter : out.intra).record(d);
    }
}

void Scheduler::decide(ScheduleOutcome& out, SchedulePhase phase, int request, DecisionStatus status,
                       int wavelength, BlockReason reason)
{
    auto& d = out.decisions[static_cast<std::size_t>(request)];
    d.status = status;
    d.wavelength = WavelengthId{status == DecisionStatus::granted ? wavelength + 1 : 0};
    d.reason = reason;
    if (policy_.record_trace) {
        const auto action = status == DecisionStatus::granted ? TraceAction::granted
                          : status == DecisionStatus::blocked ? TraceAction::blocked
                                                              : TraceAction::restored;
        out.trace.push_back({phase, request, action, d.wavelength, reason});
    }
}

void Scheduler::collect(const RequestBatch& batch, TrafficKind kind)
{
    work_.clear();
    for (std::size_t r = 0; r < batch.requests.size(); ++r) {
        if (batch.requests[r].kind == kind)
            work_.push_back(static_cast<int>(r));
    }
}

// Counting sort of work_ by destination node: node v owns
// slots_[offset_[v] .. offset_[v] + pending_[v]).
void Scheduler::fill_buckets(const RequestBatch& batch)
{
    auto dest = [&](int r) {
        return static_cast<std::size_t>(node_index(config_, batch.requests[static_cast<std::size_t>(r)].destination));
    };
    std::fill(pending_.begin(), pending_.end(), 0);
    for (int r : work_)
        ++pending_[dest(r)];
    offset_[0] = 0;
    for (std::size_t v = 0; v < pending_.size(); ++v)
        offset_[v + 1] = offset_[v] + pending_[v];
    slots_.resize(work_.size());
    std::fill(pending_.begin(), pending_.end(), 0);
    for (int r : work_) {
        const auto v = dest(r);
        slots_[static_cast<std::size_t>(offset_[v] + pending_[v]++)] = r;
    }
}

void Scheduler::run_inter_pass(const RequestBatch& batch, OccupancyState& state, Rng& rng, int start_coupler,
                               WavelengthRule rule, SchedulePhase phase, bool collect_shortage,
                               ScheduleOutcome& out)
{
    fill_buckets(batch);

    const int n = config_.awg_ports();
    const int local = config_.nodes_per_coupler();
    const auto half = static_cast<std::size_t>(table_.lower_half());

    for (int k = 0; k < n; ++k) {
        const int d = (start_coupler + k) % n;
        const int base = d * local;
        for (;;) {
            // Destination node in d with the fewest (but some) pending requests.
            int fewest = INT_MAX;
            ties_.clear();
            for (int v = base; v < base + local; ++v) {
                const int c = pending_[static_cast<std::size_t>(v)];
                if (c == 0 || c > fewest)
                    continue;
                if (c < fewest) {
                    fewest = c;
                    ties_.clear();
                }
                ties_.push_back(v);
            }
            if (ties_.empty())
                break;
            const int v = ties_[static_cast<std::size_t>(draw(rng, static_cast<int>(ties_.size())))];
            const auto vi = static_cast<std::size_t>(v);

            // Uniform requesting source, swap-removed from the bucket.
            const int count = pending_[vi];
            const auto pick = static_cast<std::size_t>(offset_[vi] + draw(rng, count));
            const auto last = static_cast<std::size_t>(offset_[vi] + count - 1);
            const int req = slots_[pick];
            std::swap(slots_[pick], slots_[last]);
            --pending_[vi];

            const int s = batch.requests[static_cast<std::size_t>(req)].source.coupler - 1;
            auto set = table_.wavelengths(s, d);
            if (rule == WavelengthRule::lower_or_upper_half)
                set = s > d ? set.first(half) : set.subspan(half);

            int free_count = 0;
            for (int w : set)
                free_count += state.link_available(s, d, w) ? 1 : 0;
            if (free_count == 0) {
                decide(out, phase, req, DecisionStatus::blocked, 0, BlockReason::wavelength_shortage);
                if (collect_shortage)
                    shortage_.push_back(req);
                continue;
            }
            int nth = draw(rng, free_count);
            int chosen = -1;
            for (int w : set) {
                if (state.link_available(s, d, w) && nth-- == 0) {
                    chosen = w;
                    break;
                }
            }

            state.grant_interdomain(s, d, chosen, v);
            decide(out, phase, req, DecisionStatus::granted, chosen, BlockReason::wavelength_shortage);
            for (int i = offset_[vi]; i < offset_[vi] + pending_[vi]; ++i)
                decide(out, phase, slots_[static_cast<std::size_t>(i)], DecisionStatus::blocked, 0,
                       BlockReason::receiver_busy);
            pending_[vi] = 0;
        }
    }
}

void Scheduler::run_interdomain(const RequestBatch& batch, OccupancyState& state, Rng& rng, int start_coupler,
                                ScheduleOutcome& out)
{
    const bool multi_fsr = config_.fsr_count() >= 2;
    const auto first_rule = multi_fsr && policy_.partitioned_first_pass ? WavelengthRule::lower_or_upper_half
                                                                        : WavelengthRule::full_set;
    const bool retry = multi_fsr && policy_.retry_pass;

    collect(batch, TrafficKind::interdomain);
    shortage_.clear();
    run_inter_pass(batch, state, rng, start_coupler, first_rule, SchedulePhase::inter_first_pass, retry, out);
    if (!retry)
        return;

    // A request whose receiver got matched meanwhile cannot succeed on retry.
    work_.clear();
    for (int req : shortage_) {
        const auto& r = batch.requests[static_cast<std::size_t>(req)];
        if (state.receiver_busy(node_index(config_, r.destination))) {
            decide(out, SchedulePhase::inter_retry_pass, req, DecisionStatus::blocked, 0, BlockReason::receiver_busy);
        } else {
            decide(out, SchedulePhase::inter_retry_pass, req, DecisionStatus::pending, 0,
                   BlockReason::wavelength_shortage);
            work_.push_back(req);
        }
    }
    run_inter_pass(batch, state, rng, start_coupler, WavelengthRule::full_set, SchedulePhase::inter_retry_pass,
                   false, out);
}

void Scheduler::run_intradomain(const RequestBatch& batch, OccupancyState& state, Rng& rng, int start_node,
                                ScheduleOutcome& out)
{
    collect(batch, TrafficKind::intradomain);
    fill_buckets(batch);

    const int n = config_.awg_ports();
    const int local = config_.nodes_per_coupler();
    const int wavelengths = config_.wavelength_count();
    const bool physical = policy_.physical_occupancy;
    constexpr auto phase = SchedulePhase::intra;

    auto block_all = [&](std::size_t vi, BlockReason reason) {
        for (int i = offset_[vi]; i < offset_[vi] + pending_[vi]; ++i)
            decide(out, phase, slots_[static_cast<std::size_t>(i)], DecisionStatus::blocked, 0, reason);
        pending_[vi] = 0;
    };

    for (int c = 0; c < n; ++c) {
        const int first = policy_.start == StartPolicy::random ? draw(rng, local) : start_node % local;
        bool exhausted = false;
        for (int k = 0; k < local; ++k) {
            const int v = c * local + (first + k) % local;
            const auto vi = static_cast<std::size_t>(v);
            if (pending_[vi] == 0)
                continue;
            if (state.receiver_busy(v)) {
                block_all(vi, BlockReason::receiver_busy);
                continue;
            }
            if (exhausted) {
                block_all(vi, BlockReason::wavelength_shortage);
                continue;
            }

            const int count = pending_[vi];
            const auto pick = static_cast<std::size_t>(offset_[vi] + draw(rng, count));
            const auto last = static_cast<std::size_t>(offset_[vi] + count - 1);
            const int req = slots_[pick];
            std::swap(slots_[pick], slots_[last]);
            --pending_[vi];

            int chosen = -1;
            if (policy_.intra_wavelength == WavelengthPolicy::first_fit) {
                for (int w = 0; w < wavelengths && chosen < 0; ++w) {
                    if (state.coupler_available(c, w, physical))
                        chosen = w;
                }
            } else {
                int free_count = 0;
                for (int w = 0; w < wavelengths; ++w)
                    free_count += state.coupler_available(c, w, physical) ? 1 : 0;
                if (free_count > 0) {
                    int nth = draw(rng, free_count);
                    for (int w = 0; w < wavelengths; ++w) {
                        if (state.coupler_available(c, w, physical) && nth-- == 0) {
                            chosen = w;
                            break;
                        }
                    }
                }
            }

            if (chosen < 0) {
                // Coupler out of wavelengths: this and every later request fail.
                decide(out, phase, req, DecisionStatus::blocked, 0, BlockReason::wavelength_shortage);
                block_all(vi, BlockReason::wavelength_shortage);
                exhausted = true;
                continue;
            }
            state.grant_intradomain(c, chosen, v);
            decide(out, phase, req, DecisionStatus::granted, chosen, BlockReason::wavelength_shortage);
            block_all(vi, BlockReason::receiver_contention);
        }
    }
}

ScheduleOutcome Scheduler::schedule(const RequestBatch& batch, Rng& rng)
{
    auto out = schedule(batch, rng, pointers_);
    pointers_.inter_start = (pointers_.inter_start + 1) % config_.awg_ports();
    pointers_.intra_start = (pointers_.intra_start + 1) % config_.nodes_per_coupler();
    return out;
}

ScheduleOutcome Scheduler::schedule(const RequestBatch& batch, Rng& rng, RoundRobinPointers pointers)
{
    auto out = fresh_outcome(batch);
    state_.reset();
    const int start = policy_.start == StartPolicy::random ? draw(rng, config_.awg_ports())
                                                           : pointers.inter_start % config_.awg_ports();
    run_interdomain(batch, state_, rng, start, out);
    run_intradomain(batch, state_, rng, pointers.intra_start, out);
    finish(batch, out);
    return out;
}

ScheduleOutcome Scheduler::schedule_interdomain(const RequestBatch& batch, OccupancyState& state, Rng& rng,
                                                int start_coupler)
{
    auto out = fresh_outcome(batch);
    const int start = policy_.start == StartPolicy::random ? draw(rng, config_.awg_ports())
                                                           : start_coupler % config_.awg_ports();
    run_interdomain(batch, state, rng, start, out);
    finish(batch, out);
    return out;
}

ScheduleOutcome Scheduler::schedule_intradomain(const RequestBatch& batch, OccupancyState& state, Rng& rng,
                                                int start_node)
{
    auto out = fresh_outcome(batch);
    run_intradomain(batch, state, rng, start_node, out);
    finish(batch, out);
    return out;
}

ScheduleOutcome schedule(const SwitchConfig& config, const RequestBatch& batch, std::uint64_t seed,
                         const SchedulerPolicy& policy)
{
    Scheduler scheduler(config, policy);
    Rng rng(seed);
    return scheduler.schedule(batch, rng, RoundRobinPointers{});
}

const char* to_string(BlockReason reason) noexcept
{
    switch (reason) {
    case BlockReason::wavelength_shortage: return "wavelength_shortage";
    case BlockReason::receiver_busy: return "receiver_busy";
    case BlockReason::receiver_contention: return "receiver_contention";
    }
    return "?";
}

const char* to_string(SchedulePhase phase) noexcept
{
    switch (phase) {
    case SchedulePhase::inter_first_pass: return "inter_first";
    case SchedulePhase::inter_retry_pass: return "inter_retry";
    case SchedulePhase::intra: return "intra";
    }
    return "?";
}

void write_trace(std::ostream& out, const RequestBatch& batch, const ScheduleOutcome& outcome)
{
    for (const auto& e : outcome.trace) {
        const auto& r = batch.requests[static_cast<std::size_t>(e.request)];
        out << to_string(e.phase) << ',' << e.request << ',' << r.source.coupler << ',' << r.source.local_index
            << ',' << r.destination.coupler << ',' << r.destination.local_index << ',';
        switch (e.action) {
        case TraceAction::granted: out << "granted," << e.wavelength.index << ",\n"; break;
        case TraceAction::blocked: out << "blocked,," << to_string(e.reason) << '\n'; break;
        case TraceAction::restored: out << "restored,,\n"; break;
        }
    }
}

} // namespace awgsim

#pragma once

// Slow, literal interdomain scheduler used for statistical cross-checks.
// Collisions are tracked per link pair: a wavelength of L(s,d) is usable iff
// coupler d does not already receive it and L(d,s) does not carry it.

#include <map>
#include <random>
#include <set>
#include <vector>

#include "awgsim/topology.hpp"
#include "awgsim/traffic.hpp"

namespace oracle {

struct ReferenceCounts {
    long requests = 0;
    long granted = 0;
    long shortage = 0;
    long busy = 0;
};

inline ReferenceCounts reference_interdomain(const awgsim::SwitchConfig& config, const awgsim::RequestBatch& batch,
                                             std::mt19937& rng, int start_coupler)
{
    using namespace awgsim;
    const int n = config.awg_ports();
    const int f = config.fsr_count();

    std::vector<int> inter;
    for (std::size_t i = 0; i < batch.requests.size(); ++i)
        if (batch.requests[i].kind == TrafficKind::interdomain)
            inter.push_back(static_cast<int>(i));

    std::map<int, std::set<int>> incoming;                 // coupler -> wavelengths
    std::map<std::pair<int, int>, std::set<int>> on_link;  // (s, d) -> wavelengths
    std::set<NodeId> matched;
    std::map<int, int> outcome;  // request -> 0 granted, 1 shortage, 2 busy

    auto pick = [&](int size) { return std::uniform_int_distribution<int>(0, size - 1)(rng); };

    auto pass = [&](const std::vector<int>& work, bool halves) {
        std::map<NodeId, std::vector<int>> pending;
        for (int r : work)
            pending[batch.requests[static_cast<std::size_t>(r)].destination].push_back(r);
        std::vector<int> failed;
        for (int k = 0; k < n; ++k) {
            const int d = (start_coupler + k) % n + 1;
            for (;;) {
                std::size_t fewest = SIZE_MAX;
                std::vector<NodeId> tied;
                for (auto& [node, list] : pending) {
                    if (node.coupler != d || list.empty())
                        continue;
                    if (list.size() < fewest) {
                        fewest = list.size();
                        tied.clear();
                    }
                    if (list.size() == fewest)
                        tied.push_back(node);
                }
                if (tied.empty())
                    break;
                const NodeId node = tied[static_cast<std::size_t>(pick(static_cast<int>(tied.size())))];
                auto& list = pending[node];
                const int idx = pick(static_cast<int>(list.size()));
                const int r = list[static_cast<std::size_t>(idx)];
                list.erase(list.begin() + idx);
                const int s = batch.requests[static_cast<std::size_t>(r)].source.coupler;

                auto set = link_wavelengths(config, Link{s, d});
                if (halves) {
                    const auto p = partition(config, Link{s, d});
                    set = s > d ? p.w1 : p.w2;
                }
                std::vector<int> free;
                for (auto w : set)
                    if (!incoming[d].count(w.index) && !on_link[{d, s}].count(w.index))
                        free.push_back(w.index);
                if (free.empty()) {
                    outcome[r] = 1;
                    failed.push_back(r);
                    continue;
                }
                const int w = free[static_cast<std::size_t>(pick(static_cast<int>(free.size())))];
                incoming[d].insert(w);
                on_link[{s, d}].insert(w);
                matched.insert(node);
                outcome[r] = 0;
                for (int other : list)
                    outcome[other] = 2;
                list.clear();
            }
        }
        return failed;
    };

    auto failed = pass(inter, f >= 2);
    if (f >= 2) {
        std::vector<int> retry;
        for (int r : failed) {
            if (matched.count(batch.requests[static_cast<std::size_t>(r)].destination))
                outcome[r] = 2;
            else
                retry.push_back(r);
        }
        pass(retry, false);
    }

    ReferenceCounts c;
    for (int r : inter) {
        ++c.requests;
        const int o = outcome.at(r);
        c.granted += o == 0;
        c.shortage += o == 1;
        c.busy += o == 2;
    }
    return c;
}

} // namespace oracle

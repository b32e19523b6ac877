#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <stdexcept>
#include <vector>

#include "awgsim/topology.hpp"

namespace awgsim {

/// One generator type for every random draw in the library.
using Rng = std::mt19937_64;

/// Node attached to a coupler; both fields 1-based.
struct NodeId {
    int coupler = 1;
    int local_index = 1;

    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

enum class TrafficKind { interdomain, intradomain };

struct ConnectionRequest {
    NodeId source;
    NodeId destination;
    TrafficKind kind = TrafficKind::interdomain;
};

/// Offered traffic of one scheduling cycle. At most one request per source.
struct RequestBatch {
    std::vector<ConnectionRequest> requests;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Zero-based dense node index: (coupler - 1) * (K - 1) + (local_index - 1).
inline int node_index(const SwitchConfig& config, NodeId node) noexcept
{
    return (node.coupler - 1) * config.nodes_per_coupler() + (node.local_index - 1);
}

inline NodeId node_at(const SwitchConfig& config, int index) noexcept
{
    return {index / config.nodes_per_coupler() + 1, index % config.nodes_per_coupler() + 1};
}

/// Builds a classified request; throws std::invalid_argument when source and
/// destination coincide or lie outside the switch.
ConnectionRequest make_request(const SwitchConfig& config, NodeId source, NodeId destination);

/// Draws one cycle of traffic. Every source is active with probability `load`;
/// an active source goes interdomain with probability `r_inter`. Destinations
/// are uniform over the nonlocal (resp. other local) nodes.
///
/// Throws ConfigError if intradomain traffic is possible but K = 2 leaves no
/// other local node, and std::invalid_argument for probabilities outside [0,1].
RequestBatch generate_batch(const SwitchConfig& config, double load, double r_inter, Rng& rng);
RequestBatch generate_batch(const SwitchConfig& config, double load, double r_inter, std::uint64_t seed);

/// Throws std::invalid_argument if the batch violates the one-request-per-source
/// rule or holds a request that does not fit the configuration.
void validate_batch(const SwitchConfig& config, const RequestBatch& batch);

/// Replay format: one `src_coupler,src_idx,dst_coupler,dst_idx` line per
/// request; blank lines and lines starting with '#' are ignored on read.
void write_batch(std::ostream& out, const RequestBatch& batch);
RequestBatch read_batch(std::istream& in, const SwitchConfig& config);

} // namespace awgsim

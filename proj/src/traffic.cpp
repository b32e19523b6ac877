#include "awgsim/traffic.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace awgsim {

namespace {

void check_probability(double p, const char* what)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

bool in_range(const SwitchConfig& config, NodeId n)
{
    return n.coupler >= 1 && n.coupler <= config.awg_ports() && n.local_index >= 1
        && n.local_index <= config.nodes_per_coupler();
}

} // namespace

ConnectionRequest make_request(const SwitchConfig& config, NodeId source, NodeId destination)
{
    if (!in_range(config, source) || !in_range(config, destination))
        throw std::invalid_argument("request endpoint outside the switch");
    if (source == destination)
        throw std::invalid_argument("request source equals destination");
    const auto kind = source.coupler == destination.coupler ? TrafficKind::intradomain : TrafficKind::interdomain;
    return {source, destination, kind};
}

RequestBatch generate_batch(const SwitchConfig& config, double load, double r_inter, Rng& rng)
{
    check_probability(load, "load");
    check_probability(r_inter, "interdomain ratio");
    const int local = config.nodes_per_coupler();
    if (local < 2 && r_inter < 1.0)
        throw ConfigError("K = 2 leaves no intradomain destination; set r_inter = 1 or K > 2");

    const int nonlocal = config.node_count() - local;
    std::bernoulli_distribution active(load);
    std::bernoulli_distribution inter(r_inter);
    std::uniform_int_distribution<int> pick_remote(0, nonlocal - 1);
    std::uniform_int_distribution<int> pick_local(0, local > 1 ? local - 2 : 0);

    RequestBatch batch;
    batch.requests.reserve(static_cast<std::size_t>(config.node_count() * load * 1.1) + 8);
    for (int src = 0; src < config.node_count(); ++src) {
        if (!active(rng))
            continue;
        const NodeId source = node_at(config, src);
        const int first_local = (source.coupler - 1) * local;
        if (inter(rng)) {
            // Skip the source coupler's block of indices.
            int dst = pick_remote(rng);
            if (dst >= first_local)
                dst += local;
            batch.requests.push_back({source, node_at(config, dst), TrafficKind::interdomain});
        } else {
            int dst = pick_local(rng);
            if (dst >= source.local_index - 1)
                ++dst;
            batch.requests.push_back({source, NodeId{source.coupler, dst + 1}, TrafficKind::intradomain});
        }
    }
    return batch;
}

RequestBatch generate_batch(const SwitchConfig& config, double load, double r_inter, std::uint64_t seed)
{
    Rng rng(seed);
    return generate_batch(config, load, r_inter, rng);
}

void validate_batch(const SwitchConfig& config, const RequestBatch& batch)
{
    std::vector<char> seen(static_cast<std::size_t>(config.node_count()), 0);
    for (const auto& r : batch.requests) {
        const auto expected = make_request(config, r.source, r.destination);
        if (expected.kind != r.kind)
            throw std::invalid_argument("request kind does not match its endpoints");
        auto& flag = seen[static_cast<std::size_t>(node_index(config, r.source))];
        if (flag)
            throw std::invalid_argument("two requests share a source node");
        flag = 1;
    }
}

void write_batch(std::ostream& out, const RequestBatch& batch)
{
    for (const auto& r : batch.requests) {
        out << r.source.coupler << ',' << r.source.local_index << ',' << r.destination.coupler << ','
            << r.destination.local_index << '\n';
    }
}

RequestBatch read_batch(std::istream& in, const SwitchConfig& config)
{
    RequestBatch batch;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        for (auto& c : line) {
            if (c == ',')
                c = ' ';
        }
        std::istringstream fields(line);
        NodeId s, d;
        if (!(fields >> s.coupler >> s.local_index >> d.coupler >> d.local_index))
            throw std::invalid_argument("batch line " + std::to_string(line_no) + ": expected four integers");
        try {
            batch.requests.push_back(make_request(config, s, d));
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("batch line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    validate_batch(config, batch);
    return batch;
}

} // namespace awgsim

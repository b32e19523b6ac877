#include "doctest.h"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <set>
#include <sstream>

#include "awgsim/traffic.hpp"

using namespace awgsim;

TEST_CASE("trivial loads")
{
    const SwitchConfig c(8, 16, 8);
    CHECK(generate_batch(c, 0.0, 0.25, 1).requests.empty());
    const auto full = generate_batch(c, 1.0, 0.25, 2);
    CHECK(full.requests.size() == static_cast<std::size_t>(c.node_count()));
    std::set<NodeId> sources;
    for (const auto& r : full.requests)
        sources.insert(r.source);
    CHECK(sources.size() == full.requests.size());
}

TEST_CASE("argument checks")
{
    CHECK_THROWS_AS(generate_batch(SwitchConfig(4, 2, 1), 0.5, 0.5, 1), ConfigError);
    CHECK_NOTHROW(generate_batch(SwitchConfig(4, 2, 1), 0.5, 1.0, 1));
    CHECK_THROWS_AS(generate_batch(SwitchConfig(4, 8, 1), 1.5, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(generate_batch(SwitchConfig(4, 8, 1), 0.5, -0.1, 1), std::invalid_argument);

    const SwitchConfig c(4, 8, 1);
    CHECK_THROWS_AS(make_request(c, {1, 1}, {1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(make_request(c, {5, 1}, {1, 1}), std::invalid_argument);
    CHECK(make_request(c, {1, 1}, {2, 1}).kind == TrafficKind::interdomain);
    CHECK(make_request(c, {1, 1}, {1, 2}).kind == TrafficKind::intradomain);
}

TEST_CASE("same seed, same batch")
{
    const SwitchConfig c(16, 64, 4);
    const auto a = generate_batch(c, 0.6, 0.25, 99);
    const auto b = generate_batch(c, 0.6, 0.25, 99);
    REQUIRE(a.requests.size() == b.requests.size());
    for (std::size_t i = 0; i < a.requests.size(); ++i) {
        CHECK(a.requests[i].source == b.requests[i].source);
        CHECK(a.requests[i].destination == b.requests[i].destination);
    }
}

TEST_CASE("destinations respect the traffic class")
{
    const SwitchConfig c(8, 6, 8);
    Rng rng(5);
    for (int b = 0; b < 500; ++b) {
        const auto batch = generate_batch(c, 0.7, 0.5, rng);
        CHECK_NOTHROW(validate_batch(c, batch));
        for (const auto& r : batch.requests) {
            CHECK(r.source != r.destination);
            CHECK((r.kind == TrafficKind::interdomain) == (r.source.coupler != r.destination.coupler));
        }
    }
}

TEST_CASE("request count is binomial (chi-square, alpha = 0.01)")
{
    const SwitchConfig c(4, 8, 1);  // 28 sources
    const int sources = c.node_count();
    const double rho = 0.3;
    const int batches = 20000;
    std::vector<int> hist(static_cast<std::size_t>(sources) + 1, 0);
    Rng rng(2024);
    for (int b = 0; b < batches; ++b)
        ++hist[generate_batch(c, rho, 0.25, rng).requests.size()];

    // Bins with expected count >= 5; the tails are pooled into the end bins.
    boost::math::binomial_distribution<double> dist(sources, rho);
    std::vector<double> expected;
    std::vector<double> observed;
    double e_acc = 0;
    double o_acc = 0;
    for (int k = 0; k <= sources; ++k) {
        e_acc += batches * boost::math::pdf(dist, k);
        o_acc += hist[static_cast<std::size_t>(k)];
        if (e_acc >= 5) {
            expected.push_back(e_acc);
            observed.push_back(o_acc);
            e_acc = o_acc = 0;
        }
    }
    expected.back() += e_acc;
    observed.back() += o_acc;

    double chi2 = 0;
    for (std::size_t i = 0; i < expected.size(); ++i)
        chi2 += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
    const double df = static_cast<double>(expected.size() - 1);
    const double critical = boost::math::quantile(boost::math::chi_squared(df), 0.99);
    INFO("chi2 = " << chi2 << ", critical = " << critical);
    CHECK(chi2 < critical);
}

TEST_CASE("interdomain fraction at the reference point")
{
    const SwitchConfig c(64, 64, 1);
    Rng rng(7);
    std::int64_t inter = 0;
    std::int64_t total = 0;
    for (int b = 0; b < 10000; ++b) {
        for (const auto& r : generate_batch(c, 0.5, 0.25, rng).requests) {
            inter += r.kind == TrafficKind::interdomain ? 1 : 0;
            ++total;
        }
    }
    const double frac = static_cast<double>(inter) / total;
    const double sigma = std::sqrt(0.25 * 0.75 / total);
    CHECK(std::abs(frac - 0.25) <= 3 * sigma);
}

TEST_CASE("interdomain destinations are uniform over nonlocal nodes")
{
    const SwitchConfig c(3, 4, 1);  // 9 nodes; each source has 6 nonlocal destinations
    std::vector<int> hist(static_cast<std::size_t>(c.node_count()), 0);
    Rng rng(11);
    int n = 0;
    for (int b = 0; b < 20000; ++b) {
        for (const auto& r : generate_batch(c, 1.0, 1.0, rng).requests) {
            if (r.source == NodeId{1, 1}) {
                ++hist[static_cast<std::size_t>(node_index(c, r.destination))];
                ++n;
            }
        }
    }
    for (int v = 0; v < 3; ++v)
        CHECK(hist[static_cast<std::size_t>(v)] == 0);
    double chi2 = 0;
    const double e = n / 6.0;
    for (int v = 3; v < 9; ++v)
        chi2 += (hist[static_cast<std::size_t>(v)] - e) * (hist[static_cast<std::size_t>(v)] - e) / e;
    CHECK(chi2 < boost::math::quantile(boost::math::chi_squared(5), 0.99));
}

TEST_CASE("batch text round trip")
{
    const SwitchConfig c(4, 6, 2);
    const auto batch = generate_batch(c, 0.8, 0.4, 3);
    std::stringstream ss;
    write_batch(ss, batch);
    std::stringstream in("# replay\n\n" + ss.str());
    const auto back = read_batch(in, c);
    REQUIRE(back.requests.size() == batch.requests.size());
    for (std::size_t i = 0; i < batch.requests.size(); ++i) {
        CHECK(back.requests[i].source == batch.requests[i].source);
        CHECK(back.requests[i].destination == batch.requests[i].destination);
        CHECK(back.requests[i].kind == batch.requests[i].kind);
    }

    std::stringstream dup("1,1,2,1\n1,1,3,1\n");
    CHECK_THROWS(read_batch(dup, c));
    std::stringstream junk("1,1,x,1\n");
    CHECK_THROWS(read_batch(junk, c));
}

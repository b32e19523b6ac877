#include "doctest.h"

#include <algorithm>
#include <set>

#include "awgsim/topology.hpp"

using namespace awgsim;

namespace {

std::vector<int> ids(const std::vector<WavelengthId>& ws)
{
    std::vector<int> out;
    for (auto w : ws)
        out.push_back(w.index);
    return out;
}

} // namespace

TEST_CASE("config validation and derived sizes")
{
    const SwitchConfig c(16, 64, 4);
    CHECK(c.wavelength_count() == 64);
    CHECK(c.nodes_per_coupler() == 63);
    CHECK(c.node_count() == 16 * 63);
    CHECK(SwitchConfig::from_wavelengths(64, 64, 8) == SwitchConfig(8, 64, 8));

    CHECK_THROWS_AS(SwitchConfig(1, 64, 1), std::invalid_argument);
    CHECK_THROWS_AS(SwitchConfig(4, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(SwitchConfig(4, 4, 0), std::invalid_argument);
    CHECK_THROWS_AS(SwitchConfig::from_wavelengths(64, 64, 3), std::invalid_argument);
}

TEST_CASE("4x4 AWG with four FSRs matches the published routing table")
{
    const SwitchConfig c(4, 8, 4);
    const int table[4][4][4] = {
        {{1, 5, 9, 13}, {2, 6, 10, 14}, {3, 7, 11, 15}, {4, 8, 12, 16}},
        {{2, 6, 10, 14}, {3, 7, 11, 15}, {4, 8, 12, 16}, {1, 5, 9, 13}},
        {{3, 7, 11, 15}, {4, 8, 12, 16}, {1, 5, 9, 13}, {2, 6, 10, 14}},
        {{4, 8, 12, 16}, {1, 5, 9, 13}, {2, 6, 10, 14}, {3, 7, 11, 15}},
    };
    for (int i = 1; i <= 4; ++i) {
        for (int j = 1; j <= 4; ++j) {
            const auto& want = table[i - 1][j - 1];
            CHECK(ids(link_wavelengths(c, {i, j})) == std::vector<int>(want, want + 4));
        }
    }
}

TEST_CASE("single FSR, output N")
{
    for (int n : {2, 5, 17, 64}) {
        const SwitchConfig c(n, 4, 1);
        CHECK(ids(link_wavelengths(c, {1, n})) == std::vector<int>{n});
    }
}

TEST_CASE("bad ports are range errors")
{
    const SwitchConfig c(4, 8, 2);
    CHECK_THROWS_AS(link_wavelengths(c, {0, 1}), std::out_of_range);
    CHECK_THROWS_AS(link_wavelengths(c, {1, 5}), std::out_of_range);
    CHECK_THROWS_AS(reciprocity_check(c, 5, 1), std::out_of_range);
}

TEST_CASE("each port demultiplexes the full band, in both directions")
{
    for (auto [n, f] : {std::pair{4, 4}, {8, 2}, {16, 3}, {7, 5}, {64, 1}}) {
        const SwitchConfig c(n, 4, f);
        for (int i = 1; i <= n; ++i) {
            std::multiset<int> by_input;
            std::multiset<int> by_output;
            for (int j = 1; j <= n; ++j) {
                for (auto w : link_wavelengths(c, {i, j}))
                    by_input.insert(w.index);
                for (auto w : link_wavelengths(c, {j, i}))
                    by_output.insert(w.index);
            }
            std::multiset<int> all;
            for (int w = 1; w <= n * f; ++w)
                all.insert(w);
            CHECK(by_input == all);
            CHECK(by_output == all);
        }
    }
}

TEST_CASE("reciprocity")
{
    CHECK(reciprocity_check(SwitchConfig(4, 8, 4), 1, 2));
    CHECK(reciprocity_check(SwitchConfig(4, 8, 4), 3, 3));
    const SwitchConfig c(8, 8, 2);
    for (int i = 1; i <= 8; ++i)
        for (int j = 1; j <= 8; ++j)
            CHECK(reciprocity_check(c, i, j));
}

TEST_CASE("partition halves")
{
    const SwitchConfig c4(4, 8, 4);
    const auto p = partition(c4, {1, 2});
    CHECK(ids(p.w1) == std::vector<int>{2, 6});
    CHECK(ids(p.w2) == std::vector<int>{10, 14});

    const SwitchConfig c2(32, 8, 2);
    for (int i = 1; i <= 32; i += 7) {
        const auto q = partition(c2, {i, 32 - i + 1});
        CHECK(q.w1.size() == 1);
        CHECK(q.w2.size() == 1);
    }

    const SwitchConfig c3(16, 8, 3);
    for (int i = 1; i <= 16; ++i) {
        for (int j = 1; j <= 16; ++j) {
            const auto q = partition(c3, {i, j});
            REQUIRE(q.w1.size() == 2);
            REQUIRE(q.w2.size() == 1);
            auto joined = ids(q.w1);
            for (auto w : q.w2)
                joined.push_back(w.index);
            CHECK(joined == ids(link_wavelengths(c3, {i, j})));
            CHECK(ids(q.w1) == ids(partition(c3, {j, i}).w1));
            CHECK(ids(q.w2) == ids(partition(c3, {j, i}).w2));
        }
    }

    CHECK_THROWS_AS(partition(SwitchConfig(8, 8, 1), {1, 2}), UnsupportedPartition);
}

TEST_CASE("routing table agrees with the routing function")
{
    for (auto [n, f] : {std::pair{4, 4}, {16, 3}, {8, 8}}) {
        const SwitchConfig c(n, 4, f);
        const RoutingTable t(c);
        CHECK(t.lower_half() == (f + 1) / 2);
        for (int s = 0; s < n; ++s) {
            for (int d = 0; d < n; ++d) {
                const auto span = t.wavelengths(s, d);
                const auto want = link_wavelengths(c, {s + 1, d + 1});
                REQUIRE(span.size() == want.size());
                for (std::size_t k = 0; k < span.size(); ++k)
                    CHECK(span[k] + 1 == want[k].index);
            }
        }
    }
}

#include "doctest.h"

#include <cmath>
#include <set>
#include <stdexcept>

#include "awgsim/montecarlo.hpp"

using namespace awgsim;

namespace {

SimulationPlan small_plan()
{
    SimulationPlan p;
    p.wavelength_count = 16;
    p.coupler_ports = 8;
    p.fsr_list = {1, 2, 4};
    p.loads = {0.3, 1.0};
    p.runs = 300;
    p.master_seed = 42;
    p.threads = 1;
    return p;
}

bool same(const BpEstimate& a, const BpEstimate& b)
{
    return a.fsr_count == b.fsr_count && a.awg_ports == b.awg_ports && a.load == b.load && a.runs == b.runs
           && a.b_inter == b.b_inter && a.b_intra == b.b_intra && a.se_inter == b.se_inter
           && a.se_intra == b.se_intra && a.inter == b.inter && a.intra == b.intra;
}

} // namespace

TEST_CASE("plan validation")
{
    auto p = small_plan();
    CHECK_NOTHROW(p.validate());
    p.fsr_list = {3};
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = small_plan();
    p.fsr_list = {16};
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = small_plan();
    p.runs = 0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = small_plan();
    p.loads = {1.2};
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = small_plan();
    p.fsr_list.clear();
    CHECK_THROWS_AS(p.validate(), ConfigError);
    CHECK(small_plan().switch_config(4) == SwitchConfig(4, 8, 4));
}

TEST_CASE("seeds are distinct across the grid and stable")
{
    std::set<std::uint64_t> seen;
    for (int f : {1, 2, 4, 8})
        for (int l = 0; l < 10; ++l)
            for (int r = 0; r < 100; ++r)
                seen.insert(run_seed(7, f, l, r));
    CHECK(seen.size() == 4 * 10 * 100);
    CHECK(run_seed(7, 2, 3, 4) == run_seed(7, 2, 3, 4));
    CHECK(run_seed(7, 2, 3, 4) != run_seed(8, 2, 3, 4));
}

TEST_CASE("run pointers emulate one scheduler advancing per cycle")
{
    const SwitchConfig c(8, 6, 2);
    Scheduler s(c);
    Rng rng(1);
    for (int run = 0; run < 40; ++run) {
        const auto p = run_pointers(c, run);
        CHECK(p.inter_start == s.pointers().inter_start);
        CHECK(p.intra_start == s.pointers().intra_start);
        s.schedule(RequestBatch{}, rng);
    }
}

TEST_CASE("same plan, same estimates, for any thread count")
{
    auto p = small_plan();
    const auto a = estimate(p);
    const auto b = estimate(p);
    p.threads = 3;
    const auto c = estimate(p);
    REQUIRE(a.size() == 6);
    REQUIRE(b.size() == a.size());
    REQUIRE(c.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(same(a[i], b[i]));
        CHECK(same(a[i], c[i]));
    }
    CHECK(a[0].fsr_count == 1);
    CHECK(a[1].load == 1.0);
    CHECK(a[2].fsr_count == 2);
    CHECK(a[4].awg_ports == 4);
}

TEST_CASE("record r depends only on cycle r")
{
    auto p = small_plan();
    const auto full = simulate_point(p, 2, 1);
    p.runs = 50;
    const auto prefix = simulate_point(p, 2, 1);
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        CHECK(prefix[i].inter == full[i].inter);
        CHECK(prefix[i].intra == full[i].intra);
    }
}

TEST_CASE("pooled ratio and standard error")
{
    std::vector<RunRecord> records(4);
    // Interdomain per-run ratios 0, 1/2, 1, 1/4 over 2, 4, 1, 4 requests.
    const std::int64_t req[] = {2, 4, 1, 4};
    const std::int64_t blk[] = {0, 2, 1, 1};
    for (int i = 0; i < 4; ++i) {
        records[static_cast<std::size_t>(i)].inter.requests = req[i];
        records[static_cast<std::size_t>(i)].inter.granted = req[i] - blk[i];
        records[static_cast<std::size_t>(i)].inter.receiver_busy = blk[i];
    }
    records[0].intra.requests = 3;
    records[0].intra.granted = 3;
    const auto e = summarize(1, 8, 0.5, records);
    REQUIRE(e.b_inter);
    CHECK(*e.b_inter == doctest::Approx(4.0 / 11.0));
    CHECK(e.inter.receiver_busy == 4);

    const double ratios[] = {0, 0.5, 1, 0.25};
    double mean = 0;
    for (double r : ratios)
        mean += r / 4;
    double ss = 0;
    for (double r : ratios)
        ss += (r - mean) * (r - mean);
    REQUIRE(e.se_inter);
    CHECK(*e.se_inter == doctest::Approx(std::sqrt(ss / 3 / 4)));

    // Only one run carried intradomain traffic.
    REQUIRE(e.b_intra);
    CHECK(*e.b_intra == 0.0);
    CHECK_FALSE(e.se_intra);
}

TEST_CASE("undefined values")
{
    auto p = small_plan();
    p.loads = {0.0};
    const auto zero = estimate(p);
    for (const auto& e : zero) {
        CHECK_FALSE(e.b_inter);
        CHECK_FALSE(e.b_intra);
        CHECK_FALSE(e.se_inter);
        CHECK(e.inter.requests == 0);
    }

    p = small_plan();
    p.runs = 1;
    p.loads = {1.0};
    for (const auto& e : estimate(p)) {
        CHECK(e.b_inter);
        CHECK_FALSE(e.se_inter);
    }
}

TEST_CASE("comparison table")
{
    auto p = small_plan();
    const auto est = estimate(p);
    const auto ana = analytic_points(p);
    const auto dev = compare_with_analytics(est, ana, 0.05);
    REQUIRE(dev.size() == 2 * est.size());
    for (std::size_t i = 0; i < est.size(); ++i) {
        const auto& inter = dev[2 * i];
        const auto& intra = dev[2 * i + 1];
        CHECK(inter.kind == TrafficKind::interdomain);
        CHECK(intra.kind == TrafficKind::intradomain);
        CHECK(inter.analytic == ana[i].breakdown.b_inter);
        REQUIRE(inter.abs_dev);
        CHECK(*inter.abs_dev == doctest::Approx(std::abs(*est[i].b_inter - inter.analytic)));
        CHECK(inter.exceeds == (*inter.abs_dev > 0.05));
        if (inter.analytic > 0) {
            REQUIRE(inter.rel_dev);
            CHECK(*inter.rel_dev == doctest::Approx(*inter.abs_dev / inter.analytic));
        }
    }

    CHECK(compare_with_analytics({}, {}, 0.05).empty());
    CHECK_THROWS_AS(compare_with_analytics(est, {}, 0.05), std::invalid_argument);
    auto shifted = ana;
    shifted[1].load = 0.5;
    CHECK_THROWS_AS(compare_with_analytics(est, shifted, 0.05), std::invalid_argument);

    p.loads = {0.0};
    const auto idle = compare_with_analytics(estimate(p), analytic_points(p), 0.05);
    for (const auto& d : idle) {
        CHECK_FALSE(d.simulated);
        CHECK_FALSE(d.abs_dev);
        CHECK_FALSE(d.exceeds);
    }
}

TEST_CASE("single-FSR reference point at full scale")
{
    SimulationPlan p;
    p.fsr_list = {1};
    p.loads = {0.3, 1.0};
    p.runs = 10000;
    p.threads = 1;
    const auto est = estimate(p);
    const auto ana = analytic_points(p);
    for (const auto& e : est) {
        REQUIRE(e.se_inter);
        REQUIRE(e.se_intra);
        CHECK(*e.se_inter < 0.005);
        CHECK(*e.se_intra < 0.005);
    }
    CHECK(std::abs(*est[1].b_inter - ana[1].breakdown.b_inter) <= 0.05);
}

#include "awgsim/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace awgsim {

namespace {

double clamp01(double p)
{
    return std::clamp(p, 0.0, 1.0);
}

void check_input(const AnalyticInput& in)
{
    if (in.awg_ports < 2 || in.coupler_ports < 2)
        throw std::domain_error("analytic model needs N >= 2 and K >= 2");
    if (!(in.load >= 0.0 && in.load <= 1.0) || !(in.r_inter >= 0.0 && in.r_inter <= 1.0))
        throw std::domain_error("load and interdomain ratio must lie in [0, 1]");
}

double interdomain_per_coupler(const AnalyticInput& in)
{
    return in.r_inter * (in.coupler_ports - 1) * in.load;
}

} // namespace

double bp_occupancy(double k_in, double k_out)
{
    if (!(k_in >= 0.0))
        throw std::domain_error("bp_occupancy: negative request count");
    if (!(k_out > 0.0))
        throw std::domain_error("bp_occupancy: output count must be positive");
    if (k_in == 0.0)
        return 0.0;
    // Below one output the idle fraction (1 - 1/k_out)^k_in has a negative
    // base; no output can then be idle.
    const double base = 1.0 - 1.0 / k_out;
    const double idle = base > 0.0 ? k_out * std::pow(base, k_in) : 0.0;
    return clamp01(1.0 - (k_out - idle) / k_in);
}

BpBreakdown bp_inter_f1(const AnalyticInput& in)
{
    check_input(in);
    const double n = in.awg_ports;
    const double receivers = n * (in.coupler_ports - 1);

    BpBreakdown r;
    r.m1 = interdomain_per_coupler(in);
    r.b1 = bp_occupancy(r.m1, n - 1);
    r.m2 = r.m1 * (1 - r.b1);
    r.b2 = clamp01(r.m2 / (2 * (n - 1)));
    r.m3 = n * r.m2 * (1 - r.b2);
    r.b3 = bp_occupancy(r.m3, receivers);
    r.b_inter = clamp01(1 - (1 - r.b1) * (1 - r.b2) * (1 - r.b3));
    return r;
}

BpBreakdown bp_inter_f2(const AnalyticInput& in)
{
    check_input(in);
    const double n = in.awg_ports;
    const double receivers = n * (in.coupler_ports - 1);

    BpBreakdown r;
    r.m1 = interdomain_per_coupler(in);
    r.b1 = bp_occupancy(r.m1, n - 1);
    r.m2 = r.m1 * (1 - r.b1);
    r.b2 = 0.0;
    r.m3 = n * r.m2 * (1 - r.b2);
    r.b3 = bp_occupancy(r.m3, receivers);

    r.b4 = bp_occupancy(r.b1 * r.m1, n - 1);
    r.b5 = clamp01(r.m2 / (n - 1));
    r.m4 = n * r.m1 * (1 - r.b1) * (1 - r.b3);
    if (r.m4 >= receivers) {
        r.inter_saturated = true;
        r.b6_busy = 1.0;
        r.m5 = 0.0;
        r.b6_contention = 0.0;
    } else {
        r.b6_busy = r.m4 / receivers;
        r.m5 = n * r.b1 * r.m1 * (1 - r.b4) * (1 - r.b5) * (1 - r.b6_busy);
        r.b6_contention = bp_occupancy(r.m5, receivers - r.m4);
    }

    const double first_round = (1 - r.b1) * (1 - r.b2) * (1 - r.b3);
    const double second_round = (1 - r.b4) * (1 - r.b5) * (1 - r.b6_busy) * (1 - r.b6_contention);
    r.b_inter = clamp01(1 - (first_round + r.b1 * second_round));
    r.b_inter_product = clamp01(1 - first_round * second_round);
    return r;
}

BpBreakdown bp_intra(const AnalyticInput& in, double b_inter)
{
    BpBreakdown r;
    r.m1 = interdomain_per_coupler(in);
    r.b_inter = b_inter;
    return bp_intra(in, r);
}

BpBreakdown bp_intra(const AnalyticInput& in, const BpBreakdown& inter)
{
    check_input(in);
    if (!(inter.b_inter >= 0.0 && inter.b_inter <= 1.0))
        throw std::domain_error("bp_intra: interdomain blocking must lie in [0, 1]");

    const double local = in.coupler_ports - 1;
    BpBreakdown r = inter;
    r.m1 = interdomain_per_coupler(in);
    r.n_busy = r.m1 * (1 - r.b_inter);
    r.n_free = local - r.n_busy;
    r.b_l1 = clamp01(r.n_busy / local);
    if (r.n_free <= 0.0) {
        r.intra_saturated = true;
        r.b_l2 = 1.0;
        r.b_intra = 1.0;
        return r;
    }
    r.b_l2 = bp_occupancy((1 - in.r_inter) * (1 - r.b_l1) * local * in.load, r.n_free);
    r.b_intra = clamp01(1 - (1 - r.b_l1) * (1 - r.b_l2));
    return r;
}

double bp_single_coupler(const AnalyticInput& in)
{
    check_input(in);
    return bp_occupancy(interdomain_per_coupler(in), in.coupler_ports);
}

BpBreakdown analytic_breakdown(const AnalyticInput& in, int fsr_count)
{
    if (fsr_count < 1)
        throw std::domain_error("FSR count must be at least 1");
    if (fsr_count == 1)
        return bp_intra(in, bp_inter_f1(in));
    if (fsr_count == 2)
        return bp_intra(in, bp_inter_f2(in));
    return bp_intra(in, bp_single_coupler(in));
}

} // namespace awgsim

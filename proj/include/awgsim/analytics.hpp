#pragma once

namespace awgsim {

/// Operating point of the closed-form blocking model.
struct AnalyticInput {
    int awg_ports = 64;      // N
    int coupler_ports = 64;  // K
    double load = 0.0;       // rho
    double r_inter = 0.25;
};

/// Every intermediate of the blocking chains. Fields a given chain does not
/// use stay at zero.
struct BpBreakdown {
    // Mean request counts.
    double m1 = 0;  // interdomain requests per coupler
    double m2 = 0;  // survivors of the per-link selection
    double m3 = 0;  // requests reaching receiver contention
    double m4 = 0;  // busy receivers after the first round (two FSRs)
    double m5 = 0;  // second-round requests aimed at free receivers

    // Per-step blocking probabilities.
    double b1 = 0;
    double b2 = 0;
    double b3 = 0;
    double b4 = 0;
    double b5 = 0;
    double b6_busy = 0;        // destined to a receiver taken in round one
    double b6_contention = 0;  // contention among free receivers in round two

    double b_inter = 0;
    /// Two FSRs only: 1 - prod(1 - b_l) over all seven factors, kept for
    /// reference. `b_inter` instead composes the rounds as alternatives.
    double b_inter_product = 0;
    bool inter_saturated = false;

    // Intradomain chain.
    double n_busy = 0;
    double n_free = 0;
    double b_l1 = 0;
    double b_l2 = 0;
    double b_intra = 0;
    bool intra_saturated = false;
};

/// Blocking probability when `k_in` requests pick uniformly among `k_out`
/// outputs and each output accepts one. Real-valued arguments use the
/// continuous extension of the power term; the result is clamped to [0, 1].
/// Returns 0 for k_in = 0; throws std::domain_error for k_in < 0 or
/// k_out <= 0.
double bp_occupancy(double k_in, double k_out);

/// Single FSR: per-link selection, reverse-direction conflict, receiver
/// contention.
BpBreakdown bp_inter_f1(const AnalyticInput& in);

/// Two FSRs: the single-FSR round with no reverse conflict, followed by a
/// second round for the requests that lost the per-link selection.
///
/// A request is granted either in round one (passes steps 1-3) or it lost
/// step 1 and passes steps 4-6, so
///   b_inter = 1 - [(1-b1)(1-b2)(1-b3) + b1 (1-b4)(1-b5)(1-b6_busy)(1-b6_contention)].
/// If the first round leaves no free receiver, b6_busy is clamped to 1 and
/// `inter_saturated` is set.
BpBreakdown bp_inter_f2(const AnalyticInput& in);

/// Intradomain chain fed with an interdomain blocking probability. Copies the
/// interdomain fields of `inter` (if given) into the result.
BpBreakdown bp_intra(const AnalyticInput& in, double b_inter);
BpBreakdown bp_intra(const AnalyticInput& in, const BpBreakdown& inter);

/// Blocking of one K-port coupler carrying the interdomain load; the
/// large-F approximation of the interdomain chain.
double bp_single_coupler(const AnalyticInput& in);

/// Interdomain + intradomain breakdown for a given FSR count: F = 1 and
/// F = 2 use their chains, F >= 3 the single-coupler approximation.
BpBreakdown analytic_breakdown(const AnalyticInput& in, int fsr_count);

} // namespace awgsim

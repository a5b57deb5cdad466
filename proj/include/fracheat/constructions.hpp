#pragma once

#include <limits>
#include <string>
#include <vector>

#include "fracheat/params.hpp"
#include "fracheat/potential.hpp"

namespace fracheat {

struct SolutionPair {
    SpaceTimeFunction f;
    SpaceTimeFunction g;
    /// "zero", "exact", "mollified", "paraboloid", "blowup_small_time", "blowup_large_time".
    std::string provenance;
    /// Accumulated rescale horizon and amplitude factors.
    double scale_T = 1.0;
    double factor_f = 1.0;
    double factor_g = 1.0;
    /// Right end of the time window that carries the interesting structure;
    /// the verifier samples (1e-3 horizon, horizon) by default.
    double horizon = 1.0;

    bool operator==(const SolutionPair&) const = default;
};

[[nodiscard]] SolutionPair zero_pair(double horizon = 1.0);

/// The spatially constant pair (F, G) of exact_pair(params).
[[nodiscard]] SolutionPair exact_solution_pair(const ProblemParams& params);

/// x = sqrt(T) xbar, t = T tbar with amplitudes (K1 K2^l)^{1/(1-ls)} T^gamma1 and
/// (K2 K1^s)^{1/(1-ls)} T^gamma2. A pair solving the system with K1 = K2 = 1
/// maps to a pair solving it with (K1, K2). Throws DomainError if lambda sigma = 1.
[[nodiscard]] SolutionPair rescale(const SolutionPair& pair, double T, const ProblemParams& params);

struct MollifiedPairSpec {
    double N1 = 0.0;
    double N2 = 0.0;
    double m = 0.0;
    /// a1 = (m + 1)/2 and the open interval (a1^{1/l}, a1^s) for a2.
    double a1_reference = 0.0;
    double a2_lo = 0.0;
    double a2_hi = 0.0;
    /// Amplitudes actually used.
    double a1 = 0.0;
    double a2 = 0.0;
    /// True when a_i = (N_i/M_i)^{ls/(1-ls)}, so f(0,t) and g(0,t) hit the
    /// target growth exactly; otherwise they dominate it.
    bool exact_growth = false;
    double delta = 0.0;
    double gamma_trunc = 0.0;
    double epsilon = 0.0;
    /// Certified lower bounds of (J_a f)^s / g and (J_b g)^l / f.
    double lower_bound_g = 0.0;
    double lower_bound_f = 0.0;
    double T = 1.0;
};

struct MollifiedResult {
    SolutionPair pair;
    MollifiedPairSpec spec;
};

/// Compactly supported pair with f(0,t) ~ N1^{ls/(1-ls)} t^gamma1 on (0, T).
/// Throws DomainError unless lambda sigma < 1 and 0 < N_i < M_i; SearchFailure
/// if the cutoff width cannot be certified.
[[nodiscard]] MollifiedResult mollified_pair(const ProblemParams& params, double N1, double N2,
                                             double T = 1.0, const QuadratureConfig& cfg = {});

struct ParaboloidResult {
    SolutionPair pair;
    double L1 = 0.0;
    double L2 = 0.0;
    /// Largest N with f >= N t^g1, g >= N t^g2, J_a f >= N t^{g2/s},
    /// J_b g >= N t^{g1/l} on |x|^2 < t, from the certified bounds.
    double N = 0.0;
    /// (J_a fbar) >= C_alpha gbar^{1/s} and (J_b gbar) >= C_beta fbar^{1/l} on |x|^2 < t.
    double C_alpha = 0.0;
    double C_beta = 0.0;
};

/// f = L1 F(t) chi_{|x|^2 < t}, g = L2 G(t) chi_{|x|^2 < t}. Requires lambda sigma < 1.
[[nodiscard]] ParaboloidResult paraboloid_pair(const ProblemParams& params);

struct XiEtaGeometry {
    double xi0 = 0.0;   // (n+2)/(2p)
    double eta0 = 0.0;
    double eta2 = 0.0;  // beta + (n+2)/(2 p lambda)
    double eta3 = 0.0;  // ((n+2)/(2p) - alpha) sigma
    double s0 = 0.0;    // (n+2)/(2 eta0)
    bool sigma_below_sigma0 = false;
};

/// Points where the lines xi = (eta - beta) lambda and eta = (xi - alpha) sigma
/// meet xi = (n+2)/(2p). Requires sigma > mu(lambda).
[[nodiscard]] XiEtaGeometry xi_eta_geometry(const ProblemParams& params);

struct P1Choice {
    double xi1 = 0.0;
    double eta1 = 0.0;
    double r = 0.0;
    double s = 0.0;
};

/// A point strictly inside xi < (eta - beta) lambda, eta < (xi - alpha) sigma
/// with r in (p, p + margin), s in (s0, s0 + margin). Throws Infeasible if
/// sigma <= mu(lambda) or the instance is outside the blow-up regimes.
[[nodiscard]] P1Choice pick_P1(const ProblemParams& params, double epsilon_margin = 0.1);

struct P4Point {
    double xi4 = 0.0;
    double eta4 = 0.0;
};

/// Intersection of xi = (eta - beta) lambda and eta = (xi - alpha) sigma.
/// Throws DomainError if lambda sigma = 1, Infeasible if lambda sigma < 1.
[[nodiscard]] P4Point intersection_P4(const ProblemParams& params);

struct BlowupFamilySpec {
    double xi = 0.0;
    double eta = 0.0;
    std::vector<double> T_j;
    std::vector<double> t_j;
    double r = 0.0;
    double s = 0.0;
    /// Certified C with f <= C (J_b g)^l and g <= C (J_a f)^s before the final scaling.
    double C_f = 0.0;
    double C_g = 0.0;
    /// Final amplitudes A, B: f = A fbar, g = B gbar.
    double amp_f = 0.0;
    double amp_g = 0.0;
    /// Candidate T_j rejected by the thinning.
    int thinned = 0;
};

struct BlowupResult {
    SolutionPair pair;
    BlowupFamilySpec spec;
};

struct BlowupOptions {
    int J = 8;
    /// Small time: T_1 and the ratio T_{j+1}/T_j (< 1/4) of successive candidates.
    /// Large time: T_1 (> 2) and the ratio (> 4).
    double T1 = 0.0;
    double ratio = 0.0;
    /// Each certified inequality must hold with this fraction of its threshold.
    double margin = 0.5;
};

/// f = f0 + sum_j f_j, g = g0 + sum_j g_j concentrating at t -> 0 with
/// exponents xi = (n+2)/(2r), eta = (n+2)/(2s). Throws Infeasible when the
/// exponents are not strictly inside the admissible region.
[[nodiscard]] BlowupResult blowup_small_time(const ProblemParams& params, double r, double s,
                                             const BlowupOptions& options = {});

/// The same with exponents (xi4, eta4) and T_j -> infinity. Requires r >= r0, s >= s0.
[[nodiscard]] BlowupResult blowup_large_time(const ProblemParams& params, double r, double s,
                                             const BlowupOptions& options = {});

struct LpNormResult {
    bool finite = false;
    /// ||f||_{L^p} over the window, or +infinity. For sums, the Minkowski bound.
    double value = std::numeric_limits<double>::infinity();
    bool value_is_bound = false;
};

/// Exponent test and closed form for sums of power paraboloids
/// c zeta^{-xi} chi_{|x|^2 < zeta}, zeta = t - o or o - t, restricted to
/// t_lo < t < t_hi. Throws DomainError on other shapes.
[[nodiscard]] LpNormResult lp_norm_finite(const SpaceTimeFunction& fn, double p, int n,
                                          double t_lo = -std::numeric_limits<double>::infinity(),
                                          double t_hi = std::numeric_limits<double>::infinity());

}  // namespace fracheat

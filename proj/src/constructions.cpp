#include "fracheat/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracheat/errors.hpp"
#include "fracheat/sharp_bounds.hpp"
#include "fracheat/special.hpp"

namespace fracheat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ProblemParams unit_K(const ProblemParams& params) {
    ProblemParams p = params;
    p.K1 = 1.0;
    p.K2 = 1.0;
    return p;
}

SpaceTimeFunction single(RadialProfile spatial, TimeProfile temporal) {
    return SpaceTimeFunction::separable(std::move(spatial), std::move(temporal));
}

// c zeta^{-xi} chi_{|x|^2 < zeta}, zeta = t, on lo < t < hi.
SeparableTerm forward_power(double xi, double hi) {
    TimeProfile tp;
    tp.pieces.push_back(PowerPiece{0.0, hi, 1.0, -xi, 0.0, false});
    return SeparableTerm{Paraboloid{0.0, false}, std::move(tp)};
}

// zeta^{-xi} chi_{|x|^2 < zeta}, zeta = T - t, on tj < t < T.
SeparableTerm reflected_power(double xi, double T, double tj) {
    TimeProfile tp;
    tp.pieces.push_back(PowerPiece{tj, T, 1.0, -xi, T, true});
    return SeparableTerm{Paraboloid{T, true}, std::move(tp)};
}

// Smallest C with a^l + b^l <= C (a + b)^l.
double sum_power_constant(double l) { return l >= 1.0 ? 1.0 : std::pow(2.0, 1.0 - l); }

struct FamilyConstants {
    double l_alpha;       // J_a f0 >= l_alpha t^{a - xi} on |x|^2 < t
    double l_beta;        // J_b g0 >= l_beta t^{b - eta}
    double l_alpha_plus;  // J_a f_j >= l_alpha_plus (T_j - t)^{a - xi} on the upper quarter of Omega_j
    double l_beta_plus;
};

FamilyConstants family_constants(const ProblemParams& P, double xi, double eta) {
    const double cr = reversed_paraboloid_c_n(P.n);
    return {j_alpha_lower_paraboloid(1.0, P.alpha, -xi, P.n),
            j_alpha_lower_paraboloid(1.0, P.beta, -eta, P.n),
            cr * std::pow(2.0, -xi) / gamma_fn(P.alpha + 1.0),
            cr * std::pow(2.0, -eta) / gamma_fn(P.beta + 1.0)};
}

// Amplitudes A, B with A fbar <= K1 (B J gbar)^l / 2 and B gbar <= K2 (A J fbar)^s / 2
// given fbar <= Cf (J gbar)^l and gbar <= Cg (J fbar)^s, lambda sigma > 1.
std::pair<double, double> blowup_amplitudes(const ProblemParams& P, double Cf, double Cg) {
    const double l = P.lambda, s = P.sigma;
    const double logA = (std::log(2.0 * Cf) + l * std::log(2.0 * Cg) - std::log(P.K1) -
                         l * std::log(P.K2)) /
                        (l * s - 1.0);
    const double logB = std::log(P.K2) + s * logA - std::log(2.0 * Cg);
    if (!std::isfinite(logA) || std::abs(logA) > 700.0 || std::abs(logB) > 700.0) {
        throw SearchFailure("blow-up amplitudes are not representable in double precision");
    }
    return {std::exp(logA), std::exp(logB)};
}

void require_blowup_regime(const ProblemParams& P, const char* what) {
    const std::string w(what);
    if (!(P.lambda * P.sigma > 1.0)) throw Infeasible(w + ": requires lambda sigma > 1");
    const double n2 = P.n + 2.0;
    if (!(2.0 * P.p * P.alpha < n2)) throw Infeasible(w + ": requires 2 p alpha < n + 2");
    if (!((n2 - 2.0 * P.p * P.alpha) * P.q * P.q * P.sigma <=
          (n2 - 2.0 * P.q * P.beta) * P.p * P.p * P.lambda)) {
        throw Infeasible(w + ": parameters not normalized; swap the unknowns");
    }
    if (!(P.sigma > mu(P.lambda, P.n, P.p, P.alpha, P.beta))) {
        throw Infeasible(w + ": requires sigma > mu(lambda)");
    }
}

double lp_piece_power(const PowerPiece& pc, double zeta_lo, double zeta_hi, double p, int n,
                      bool& finite) {
    // ||c zeta^{-xi} chi||_p^p = c^p |B_1| int zeta^{gamma p - 1}, gamma = (n+2)/(2p) - xi.
    double gp = 0.5 * n + 1.0 + pc.exponent * p;
    // Exponents built as (n+2)/(2r) land on the boundary only up to rounding.
    if (std::abs(gp) <= 1e-12 * (0.5 * n + 1.0)) gp = 0.0;
    if (!(zeta_hi > zeta_lo)) {
        finite = true;
        return 0.0;
    }
    double integral;
    if (zeta_lo <= 0.0 && gp <= 0.0) {
        finite = false;
        return kInf;
    }
    if (std::isinf(zeta_hi)) {
        if (gp >= 0.0) {
            finite = false;
            return kInf;
        }
        integral = -std::pow(zeta_lo, gp) / gp;
    } else if (gp == 0.0) {
        integral = std::log(zeta_hi / zeta_lo);
    } else {
        integral = (std::pow(zeta_hi, gp) - (zeta_lo > 0.0 ? std::pow(zeta_lo, gp) : 0.0)) / gp;
    }
    finite = true;
    return std::pow(std::abs(pc.coef), p) * unit_ball_volume(n) * integral;
}

}  // namespace

SolutionPair zero_pair(double horizon) {
    SolutionPair out;
    out.provenance = "zero";
    out.horizon = horizon;
    return out;
}

SolutionPair exact_solution_pair(const ProblemParams& params) {
    const auto tp = exact_pair(params);
    SolutionPair out;
    out.f = single(Constant1{}, tp.F);
    out.g = single(Constant1{}, tp.G);
    out.provenance = "exact";
    return out;
}

SolutionPair rescale(const SolutionPair& pair, double T, const ProblemParams& params) {
    params.validate();
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("rescale: T must be positive and finite");
    const double l = params.lambda, s = params.sigma, a = params.alpha, b = params.beta;
    const double d = 1.0 - l * s;
    if (std::abs(d) < 1e-12) throw DomainError("rescale: undefined for lambda sigma = 1");
    const double g1 = (b + a * s) * l / d;
    const double g2 = (a + b * l) * s / d;
    const double lnT = std::log(T);
    const double cf = std::exp((std::log(params.K1) + l * std::log(params.K2)) / d + g1 * lnT);
    const double cg = std::exp((std::log(params.K2) + s * std::log(params.K1)) / d + g2 * lnT);
    SolutionPair out = pair;
    out.f.amplitude *= cf;
    out.g.amplitude *= cg;
    out.f.time_scale *= T;
    out.g.time_scale *= T;
    out.scale_T *= T;
    out.factor_f *= cf;
    out.factor_g *= cg;
    out.horizon *= T;
    return out;
}

MollifiedResult mollified_pair(const ProblemParams& params, double N1, double N2, double T,
                               const QuadratureConfig& cfg) {
    params.validate();
    cfg.validate();
    const auto base = sharp_constants(unit_K(params));
    if (!(N1 > 0.0 && N1 < base.M1)) throw DomainError("mollified_pair: requires 0 < N1 < M1");
    if (!(N2 > 0.0 && N2 < base.M2)) throw DomainError("mollified_pair: requires 0 < N2 < M2");
    if (!(T > 0.0)) throw DomainError("mollified_pair: T must be > 0");
    const double l = params.lambda, s = params.sigma, a = params.alpha, b = params.beta;
    const double d = 1.0 - l * s;
    const double kappa = base.kappa;

    MollifiedPairSpec spec;
    spec.N1 = N1;
    spec.N2 = N2;
    spec.T = T;
    const double r1 = N1 / base.M1, r2 = N2 / base.M2;
    spec.m = std::max(std::pow(r2, l * l * s / d), std::pow(r1, kappa));
    spec.a1_reference = 0.5 * (spec.m + 1.0);
    spec.a2_lo = std::pow(spec.a1_reference, 1.0 / l);
    spec.a2_hi = std::pow(spec.a1_reference, s);

    const double A1 = std::pow(r1, kappa), A2 = std::pow(r2, kappa);
    constexpr double kMinLogSlack = 1e-9;
    if (l * std::log(A2) - std::log(A1) > kMinLogSlack && s * std::log(A1) - std::log(A2) > kMinLogSlack) {
        spec.a1 = A1;
        spec.a2 = A2;
        spec.exact_growth = true;
    } else {
        spec.a1 = spec.a1_reference;
        spec.a2 = std::sqrt(spec.a2_lo * spec.a2_hi);
    }
    // ln of sqrt(a1^s / a2) and sqrt(a2^l / a1).
    const double log_sg = 0.5 * (s * std::log(spec.a1) - std::log(spec.a2));
    const double log_sf = 0.5 * (l * std::log(spec.a2) - std::log(spec.a1));
    if (!(log_sg > 0.0 && log_sf > 0.0)) throw SearchFailure("mollified_pair: no amplitude slack");

    // Cutoff width.
    const auto F = TimeProfile::power(base.f_coef, base.gamma1);
    const auto G = TimeProfile::power(base.g_coef, base.gamma2);
    const double Ca = F(2.0) / (gamma_fn(a + 1.0) * std::pow(G(1.0), 1.0 / s));
    const double Cb = G(2.0) / (gamma_fn(b + 1.0) * std::pow(F(1.0), 1.0 / l));
    const double need_a = std::exp(-log_sg / s);  // required J_a F_delta / J_a F
    const double need_b = std::exp(-log_sf / l);
    double delta = std::min({0.5 * std::pow((1.0 - need_a) / Ca, 1.0 / a),
                             0.5 * std::pow((1.0 - need_b) / Cb, 1.0 / b), 0.5});
    auto cut = [](TimeProfile tp, double dl) {
        tp.cutoff = SmoothCutoff{1.0, dl};
        return tp;
    };
    bool ok = false;
    for (int attempt = 0; attempt < 40 && !ok; ++attempt) {
        const auto Fd = cut(F, delta);
        const auto Gd = cut(G, delta);
        ok = true;
        for (int k = 0; k <= 16 && ok; ++k) {
            const double t = 1.0 + delta * k / 16.0;
            ok = rl_integral(Fd, t, a, cfg) >= need_a * rl_integral(F, t, a, cfg) &&
                 rl_integral(Gd, t, b, cfg) >= need_b * rl_integral(G, t, b, cfg);
        }
        if (!ok) delta *= 0.5;
    }
    if (!ok) throw SearchFailure("mollified_pair: cutoff width could not be certified");
    spec.delta = delta;

    // Truncation radius: keep half of each log slack after the I(gamma) loss.
    auto log_I = [&](double g) { return std::log1p(-gaussian_ball_tail(0.5 * g, params.n)); };
    auto gamma_ok = [&](double g) {
        return log_sg + s * log_I(g) >= 0.5 * log_sg && log_sf + l * log_I(g) >= 0.5 * log_sf;
    };
    double hi = 2.0;
    while (!gamma_ok(hi)) {
        hi *= 2.0;
        if (hi > 1e12) throw SearchFailure("mollified_pair: no truncation radius found");
    }
    double lo = std::max(1.0, 0.5 * hi);
    if (hi > 2.0) {
        for (int it = 0; it < 60 && hi - lo > 1e-3 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            (gamma_ok(mid) ? hi : lo) = mid;
        }
    }
    const double gam = hi;
    spec.gamma_trunc = gam;

    const double pg = log_sg + s * log_I(gam);
    const double pf = log_sf + l * log_I(gam);
    const double r2g = gam * std::numbers::sqrt2;
    spec.epsilon = std::min({pg / (2.0 * s * r2g), pf / (2.0 * l * s * r2g), 0.5});
    spec.lower_bound_g = std::exp(pg - s * spec.epsilon * r2g);
    spec.lower_bound_f = std::exp(pf - l * s * spec.epsilon * r2g);

    auto Fd = cut(F, delta);
    auto Gd = cut(G, delta);
    Fd.pieces[0].coef *= spec.a1;
    Gd.pieces[0].coef *= spec.a2;
    SolutionPair pair;
    pair.f = single(ExpPhi{spec.epsilon, 1.0}, Fd);
    pair.g = single(ExpPhi{spec.epsilon, s}, Gd);
    pair.provenance = "mollified";
    pair.horizon = 1.0 + delta;

    // Spot check of the system before rescaling.
    for (double t : {0.3, 0.9, 1.0 + 0.5 * delta}) {
        for (double x : {0.0, 2.0}) {
            const double jf = j_alpha(pair.f, x, t, a, params.n, cfg);
            const double jg = j_alpha(pair.g, x, t, b, params.n, cfg);
            if (pair.f(x, t) > std::pow(jg, l) * (1.0 + 1e-9) ||
                pair.g(x, t) > std::pow(jf, s) * (1.0 + 1e-9)) {
                throw SearchFailure("mollified_pair: spot check of the system failed");
            }
        }
    }
    return {rescale(pair, T, params), spec};
}

ParaboloidResult paraboloid_pair(const ProblemParams& params) {
    params.validate();
    const auto base = sharp_constants(unit_K(params));
    const double l = params.lambda, s = params.sigma;
    const double d = 1.0 - l * s;
    const int n = params.n;
    const double low_a = base.f_coef * j_alpha_lower_paraboloid(1.0, params.alpha, base.gamma1, n);
    const double low_b = base.g_coef * j_alpha_lower_paraboloid(1.0, params.beta, base.gamma2, n);
    ParaboloidResult out;
    out.C_alpha = low_a / std::pow(base.g_coef, 1.0 / s);
    out.C_beta = low_b / std::pow(base.f_coef, 1.0 / l);
    out.L1 = std::exp((std::log(params.K1) + l * std::log(params.K2) + l * std::log(out.C_beta) +
                       l * s * std::log(out.C_alpha)) /
                      d);
    out.L2 = params.K2 * std::pow(out.L1 * out.C_alpha, s);
    out.pair.f = single(Paraboloid{0.0, false}, TimeProfile::power(out.L1 * base.f_coef, base.gamma1));
    out.pair.g = single(Paraboloid{0.0, false}, TimeProfile::power(out.L2 * base.g_coef, base.gamma2));
    out.pair.provenance = "paraboloid";
    out.N = std::min({out.L1 * base.f_coef, out.L2 * base.g_coef, out.L1 * low_a, out.L2 * low_b});
    return out;
}

XiEtaGeometry xi_eta_geometry(const ProblemParams& params) {
    params.validate();
    require_blowup_regime(params, "xi_eta_geometry");
    const double n2 = params.n + 2.0;
    XiEtaGeometry g;
    g.xi0 = n2 / (2.0 * params.p);
    g.eta2 = params.beta + n2 / (2.0 * params.p * params.lambda);
    g.eta3 = (g.xi0 - params.alpha) * params.sigma;
    const auto cp = critical_point(params.n, params.p, params.q, params.alpha, params.beta);
    g.sigma_below_sigma0 = params.sigma < cp.sigma0;
    g.eta0 = g.sigma_below_sigma0 ? g.eta3 : n2 / (2.0 * params.q);
    g.s0 = n2 / (2.0 * g.eta0);
    return g;
}

P1Choice pick_P1(const ProblemParams& params, double epsilon_margin) {
    if (!(epsilon_margin > 0.0)) throw DomainError("pick_P1: margin must be > 0");
    const auto geo = xi_eta_geometry(params);
    const double n2 = params.n + 2.0;
    const double xi_min = n2 / (2.0 * (params.p + epsilon_margin));
    const double eta_min = n2 / (2.0 * (geo.s0 + epsilon_margin));
    // Maximize min((eta - beta) lambda - xi, (xi - alpha) sigma - eta) over a grid
    // of xi strictly inside the bracket; eta balances the two margins when allowed.
    // The distances of xi and eta to (n+2)/2 enter the minimum too: the time
    // integrands near the paraboloid tips behave like tau^{(n+2)/2 - xi - 1} and
    // must stay resolvable in double precision.
    const double L = params.lambda, S = params.sigma;
    P1Choice best;
    double best_margin = 0.0;
    constexpr int kGrid = 400;
    for (int k = 1; k < kGrid; ++k) {
        const double xi = xi_min + (geo.xi0 - xi_min) * k / kGrid;
        const double lo = std::max(params.beta + xi / L, eta_min);
        const double hi = std::min((xi - params.alpha) * S, geo.eta0);
        if (!(hi > lo)) continue;
        const double inner = 1e-3 * (hi - lo);
        const double balanced = ((xi - params.alpha) * S + xi + params.beta * L) / (L + 1.0);
        const double eta = std::clamp(balanced, lo + inner, hi - inner);
        const double margin = std::min({(eta - params.beta) * L - xi, (xi - params.alpha) * S - eta,
                                        0.5 * n2 - xi, 0.5 * n2 - eta});
        if (margin > best_margin) {
            best_margin = margin;
            best = {xi, eta, n2 / (2.0 * xi), n2 / (2.0 * eta)};
        }
    }
    if (best_margin > 0.0) return best;
    throw Infeasible("pick_P1: no interior point found near P0");
}

P4Point intersection_P4(const ProblemParams& params) {
    params.validate();
    const double l = params.lambda, s = params.sigma;
    const double det = l * s - 1.0;
    if (std::abs(det) < 1e-12) throw DomainError("intersection_P4: lines are parallel at lambda sigma = 1");
    if (det < 0.0) throw Infeasible("intersection_P4: requires lambda sigma > 1");
    P4Point pt;
    pt.xi4 = l * (params.beta + params.alpha * s) / det;
    pt.eta4 = s * (params.alpha + params.beta * l) / det;
    return pt;
}

BlowupResult blowup_small_time(const ProblemParams& params, double r, double s,
                               const BlowupOptions& options) {
    params.validate();
    require_blowup_regime(params, "blowup_small_time");
    if (options.J < 1) throw DomainError("blowup_small_time: J must be >= 1");
    const double n2 = params.n + 2.0;
    const double L = params.lambda, S = params.sigma, a = params.alpha, b = params.beta;
    if (!(r > params.p) || !(s > params.q)) throw Infeasible("blowup_small_time: requires r > p, s > q");
    const double xi = n2 / (2.0 * r), eta = n2 / (2.0 * s);
    const double ef = (eta - b) * L - xi;
    const double eg = (xi - a) * S - eta;
    if (!(ef > 0.0) || !(eg > 0.0)) {
        throw Infeasible("blowup_small_time: (xi, eta) not strictly inside the admissible region");
    }
    const double T1 = options.T1 > 0.0 ? options.T1 : 0.49;
    const double ratio = options.ratio > 0.0 ? options.ratio : 0.2;
    if (!(T1 < 0.5) || !(ratio < 0.25)) throw DomainError("blowup_small_time: needs T1 < 1/2, ratio < 1/4");
    const double m = options.margin;

    const auto c = family_constants(params, xi, eta);
    const double lb = std::pow(c.l_beta, L), la = std::pow(c.l_alpha, S);
    const double lbp = std::pow(c.l_beta_plus, L), lap = std::pow(c.l_alpha_plus, S);
    struct Bounds {
        double f24, g24, f25, g25, f27, g27;
    };
    auto bounds = [&](double T) {
        Bounds B;
        B.f24 = std::pow(T, ef) / lb;
        B.g24 = std::pow(T, eg) / la;
        B.f25 = std::pow(0.25 * T, ef) / lbp;
        B.g25 = std::pow(0.25 * T, eg) / lap;
        B.f27 = std::pow(0.25 * T, -xi) * std::pow(0.75 * T, (eta - b) * L) / lb;
        B.g27 = std::pow(0.25 * T, -eta) * std::pow(0.75 * T, (xi - a) * S) / la;
        return B;
    };
    auto accepted = [&](const Bounds& B) {
        return B.f24 <= m && B.g24 <= m && B.f25 <= m && B.g25 <= m && B.f27 <= 0.5 * m &&
               B.g27 <= 0.5 * m;
    };

    BlowupResult out;
    auto& spec = out.spec;
    spec.xi = xi;
    spec.eta = eta;
    spec.r = r;
    spec.s = s;
    const double cl = sum_power_constant(L), cs = sum_power_constant(S);
    double Cf = 1.0 / lb, Cg = 1.0 / la;
    double cand = T1;
    while (static_cast<int>(spec.T_j.size()) < options.J) {
        if (cand < 1e-280) throw SearchFailure("blowup_small_time: thinning ran out of range");
        const auto B = bounds(cand);
        if (accepted(B)) {
            spec.T_j.push_back(cand);
            spec.t_j.push_back(0.5 * cand);
            Cf = std::max({Cf, cl * std::max(B.f24, B.f25), 2.0 * B.f27});
            Cg = std::max({Cg, cs * std::max(B.g24, B.g25), 2.0 * B.g27});
        } else {
            ++spec.thinned;
        }
        cand *= ratio;
    }
    spec.C_f = Cf;
    spec.C_g = Cg;
    std::tie(spec.amp_f, spec.amp_g) = blowup_amplitudes(params, Cf, Cg);

    SolutionPair& pair = out.pair;
    pair.f.components.push_back(forward_power(xi, 1.0));
    pair.g.components.push_back(forward_power(eta, 1.0));
    for (std::size_t j = 0; j < spec.T_j.size(); ++j) {
        pair.f.components.push_back(reflected_power(xi, spec.T_j[j], spec.t_j[j]));
        pair.g.components.push_back(reflected_power(eta, spec.T_j[j], spec.t_j[j]));
    }
    pair.f.amplitude = spec.amp_f;
    pair.g.amplitude = spec.amp_g;
    pair.factor_f = spec.amp_f;
    pair.factor_g = spec.amp_g;
    pair.provenance = "blowup_small_time";
    pair.horizon = 1.0;
    return out;
}

BlowupResult blowup_large_time(const ProblemParams& params, double r, double s,
                               const BlowupOptions& options) {
    params.validate();
    require_blowup_regime(params, "blowup_large_time");
    if (options.J < 1) throw DomainError("blowup_large_time: J must be >= 1");
    const auto be = blowup_exponents(params);
    const auto p4 = intersection_P4(params);
    constexpr double kRel = 1e-12;
    if (!(r >= be.r0 * (1.0 - kRel)) || !(s >= be.s0_large * (1.0 - kRel))) {
        throw Infeasible("blowup_large_time: requires r >= r0 and s >= s0");
    }
    const double n2 = params.n + 2.0;
    if (!(p4.xi4 > 0.0 && p4.xi4 < n2 / (2.0 * params.p) && p4.eta4 > 0.0 &&
          p4.eta4 < n2 / (2.0 * params.q))) {
        throw Infeasible("blowup_large_time: P4 outside the admissible box");
    }
    const double T1 = options.T1 > 0.0 ? options.T1 : 4.0;
    const double ratio = options.ratio > 0.0 ? options.ratio : 5.0;
    if (!(T1 > 2.0) || !(ratio > 4.0)) throw DomainError("blowup_large_time: needs T1 > 2, ratio > 4");
    const double L = params.lambda, S = params.sigma;
    const double xi = p4.xi4, eta = p4.eta4;

    const auto c = family_constants(params, xi, eta);
    const double lb = std::pow(c.l_beta, L), la = std::pow(c.l_alpha, S);
    const double lbp = std::pow(c.l_beta_plus, L), lap = std::pow(c.l_alpha_plus, S);
    const double cl = sum_power_constant(L), cs = sum_power_constant(S);

    BlowupResult out;
    auto& spec = out.spec;
    spec.xi = xi;
    spec.eta = eta;
    spec.r = r;
    spec.s = s;
    // f0 <= (J g0)^l / lb on Omega_0; f_j <= (J g_j)^l / lbp on the upper quarter;
    // f_j <= 3^xi f0 on the rest of Omega_j.
    spec.C_f = std::max({1.0 / lb, cl * std::max(1.0 / lb, 1.0 / lbp), (1.0 + std::pow(3.0, xi)) / lb});
    spec.C_g = std::max({1.0 / la, cs * std::max(1.0 / la, 1.0 / lap), (1.0 + std::pow(3.0, eta)) / la});
    std::tie(spec.amp_f, spec.amp_g) = blowup_amplitudes(params, spec.C_f, spec.C_g);

    double T = T1;
    for (int j = 0; j < options.J; ++j) {
        spec.T_j.push_back(T);
        spec.t_j.push_back(0.5 * T);
        T *= ratio;
    }
    SolutionPair& pair = out.pair;
    pair.f.components.push_back(forward_power(xi, kInf));
    pair.g.components.push_back(forward_power(eta, kInf));
    for (std::size_t j = 0; j < spec.T_j.size(); ++j) {
        pair.f.components.push_back(reflected_power(xi, spec.T_j[j], spec.t_j[j]));
        pair.g.components.push_back(reflected_power(eta, spec.T_j[j], spec.t_j[j]));
    }
    pair.f.amplitude = spec.amp_f;
    pair.g.amplitude = spec.amp_g;
    pair.factor_f = spec.amp_f;
    pair.factor_g = spec.amp_g;
    pair.provenance = "blowup_large_time";
    pair.horizon = spec.T_j.back();
    return out;
}

LpNormResult lp_norm_finite(const SpaceTimeFunction& fn, double p, int n, double t_lo, double t_hi) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("lp_norm_finite: requires 1 <= p < infinity");
    if (n < 1) throw DomainError("lp_norm_finite: n must be >= 1");
    if (!(t_hi > t_lo)) throw DomainError("lp_norm_finite: empty time window");
    LpNormResult out;
    out.finite = true;
    out.value = 0.0;
    std::size_t pieces = 0;
    for (const auto& c : fn.components) {
        if (const auto* term = std::get_if<SeparableTerm>(&c)) pieces += term->temporal.pieces.size();
    }
    out.value_is_bound = pieces > 1;
    if (fn.is_zero()) return out;
    const double Ts = fn.time_scale;
    const double lo = t_lo / Ts, hi = t_hi / Ts;
    // Rescaling x = sqrt(T) y, t = T s multiplies the p-th power by T^{(n+2)/2}.
    const double jac = std::pow(Ts, 0.5 * (n + 2)) * std::pow(std::abs(fn.amplitude), p);
    for (const auto& c : fn.components) {
        const auto* term = std::get_if<SeparableTerm>(&c);
        const Paraboloid* pb = term ? std::get_if<Paraboloid>(&term->spatial) : nullptr;
        if (!pb || term->temporal.cutoff || term->temporal.pieces.empty()) {
            throw DomainError("lp_norm_finite: unsupported shape (power paraboloids only)");
        }
        for (const auto& pc : term->temporal.pieces) {
            if (pc.origin != pb->origin || pc.reflected != pb->reflected) {
                throw DomainError("lp_norm_finite: unsupported shape (piece not aligned with paraboloid)");
            }
            const double a = std::max(pc.lo, lo), b = std::min(pc.hi, hi);
            if (!(b > a)) continue;
            double z_lo, z_hi;
            if (pb->reflected) {
                z_lo = std::max(0.0, pb->origin - b);
                z_hi = std::max(0.0, pb->origin - a);
            } else {
                z_lo = std::max(0.0, a - pb->origin);
                z_hi = std::max(0.0, b - pb->origin);
            }
            bool fin = true;
            const double v = lp_piece_power(pc, z_lo, z_hi, p, n, fin);
            if (!fin) {
                out.finite = false;
                out.value = kInf;
                return out;
            }
            out.value += std::pow(jac * v, 1.0 / p);
        }
    }
    return out;
}

}  // namespace fracheat

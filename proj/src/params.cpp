#include "fracheat/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fracheat/errors.hpp"

namespace fracheat {

namespace {

bool admissible(double p, double alpha, int n) {
    const double limit = n + 2.0;
    if (p > 1.0) return 2.0 * p * alpha < limit;
    return p == 1.0 && 2.0 * alpha <= limit;
}

void require_subcritical(int n, double p, double alpha, const char* what) {
    if (!(2.0 * p * alpha < n + 2.0)) {
        throw DomainError(std::string(what) + ": requires 2 p alpha < n + 2");
    }
}

}  // namespace

void ProblemParams::validate() const {
    if (n < 1) throw DomainError("n must be >= 1");
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("p must be >= 1");
    if (!(q >= 1.0) || !std::isfinite(q)) throw DomainError("q must be >= 1");
    const double positive[] = {alpha, beta, lambda, sigma, K1, K2};
    const char* names[] = {"alpha", "beta", "lambda", "sigma", "K1", "K2"};
    for (int i = 0; i < 6; ++i) {
        if (!(positive[i] > 0.0) || !std::isfinite(positive[i])) {
            throw DomainError(std::string(names[i]) + " must be > 0");
        }
    }
}

bool ProblemParams::admissible_u() const { return admissible(p, alpha, n); }
bool ProblemParams::admissible_v() const { return admissible(q, beta, n); }

ProblemParams ProblemParams::swapped() const {
    ProblemParams s = *this;
    std::swap(s.p, s.q);
    std::swap(s.alpha, s.beta);
    std::swap(s.lambda, s.sigma);
    std::swap(s.K1, s.K2);
    return s;
}

std::string_view to_string(ValidityClass v) {
    switch (v) {
        case ValidityClass::Admissible: return "Admissible";
        case ValidityClass::Critical: return "Critical";
        case ValidityClass::Supercritical: return "Supercritical";
        case ValidityClass::Invalid: return "Invalid";
    }
    return "?";
}

std::string_view to_string(Region r) {
    switch (r) {
        case Region::A: return "A";
        case Region::B: return "B";
        case Region::C: return "C";
        case Region::D: return "D";
        case Region::E: return "E";
        case Region::CriticalCase: return "CriticalCase";
        case Region::OffDomain: return "OffDomain";
    }
    return "?";
}

std::string_view to_string(Outcome o) {
    switch (o) {
        case Outcome::OnlyTrivial: return "OnlyTrivial";
        case Outcome::SharpBounds: return "SharpBounds";
        case Outcome::NoBounds: return "NoBounds";
        case Outcome::NoResult: return "NoResult";
    }
    return "?";
}

NormalizeResult normalize(const ProblemParams& params, RegimeTolerance tol) {
    params.validate();
    const double np2 = params.n + 2.0;
    const double lhs = (np2 - 2.0 * params.p * params.alpha) * params.q * params.q * params.sigma;
    const double rhs = (np2 - 2.0 * params.q * params.beta) * params.p * params.p * params.lambda;
    // Ties stay put so that normalize is idempotent on symmetric instances.
    if (lhs <= rhs + tol.abs) return {params, false};
    return {params.swapped(), true};
}

ValidityClass validity_class(double p, double alpha, int n, RegimeTolerance tol) {
    if (!(p >= 1.0) || !(alpha > 0.0) || n < 1) return ValidityClass::Invalid;
    const double gap = 2.0 * p * alpha - (n + 2.0);
    if (std::abs(gap) <= tol.abs) return ValidityClass::Critical;
    return gap < 0.0 ? ValidityClass::Admissible : ValidityClass::Supercritical;
}

double mu(double lambda, int n, double p, double alpha, double beta) {
    require_subcritical(n, p, alpha, "mu");
    if (!(lambda > 0.0)) throw DomainError("mu: lambda must be > 0");
    const double d = n + 2.0 - 2.0 * p * alpha;
    return 2.0 * p * beta / d + (n + 2.0) / (d * lambda);
}

double nu(double lambda, int n, double p, double q, double alpha, double beta) {
    require_subcritical(n, p, alpha, "nu");
    const double d = n + 2.0 - 2.0 * p * alpha;
    return (n + 2.0 - 2.0 * q * beta) * p * p / (d * q * q) * lambda;
}

CriticalPoint critical_point(int n, double p, double q, double alpha, double beta) {
    require_subcritical(n, p, alpha, "critical_point");
    require_subcritical(n, q, beta, "critical_point");
    const double np2 = n + 2.0;
    return {np2 * q / ((np2 - 2.0 * q * beta) * p), np2 * p / ((np2 - 2.0 * p * alpha) * q)};
}

BlowupExponents blowup_exponents(const ProblemParams& params) {
    params.validate();
    const auto& P = params;
    const double ls = P.lambda * P.sigma;
    if (!(ls > 1.0)) throw DomainError("blowup_exponents: requires lambda sigma > 1");
    require_subcritical(P.n, P.p, P.alpha, "blowup_exponents");
    require_subcritical(P.n, P.q, P.beta, "blowup_exponents");
    const double np2 = P.n + 2.0;
    BlowupExponents out{};
    out.r0 = np2 * (ls - 1.0) / (2.0 * (P.beta + P.alpha * P.sigma) * P.lambda);
    out.s0_large = np2 * (ls - 1.0) / (2.0 * (P.alpha + P.beta * P.lambda) * P.sigma);
    const auto cp = critical_point(P.n, P.p, P.q, P.alpha, P.beta);
    out.s0_small = std::max(P.q, P.q * cp.sigma0 / P.sigma);

    const bool normalized = !normalize(P).swapped;
    if (normalized && P.sigma > mu(P.lambda, P.n, P.p, P.alpha, P.beta) + 1e-9) {
        if (!(out.r0 > P.p) || !(out.s0_large > P.q)) {
            throw std::logic_error("blowup_exponents: r0 > p and s0 > q violated");
        }
    }
    return out;
}

Outcome outcome_for(Region region, double lambda_sigma) {
    switch (region) {
        case Region::A: return Outcome::OnlyTrivial;
        case Region::B: return Outcome::SharpBounds;
        case Region::C:
        case Region::D: return Outcome::NoBounds;
        case Region::E: return Outcome::NoResult;
        case Region::CriticalCase:
            return lambda_sigma >= 1.0 ? Outcome::OnlyTrivial : Outcome::SharpBounds;
        case Region::OffDomain: return Outcome::NoResult;
    }
    return Outcome::NoResult;
}

RegimeReport classify_region(const ProblemParams& params, RegimeTolerance tol) {
    params.validate();
    const auto& P = params;
    RegimeReport rep;
    rep.admissible_u = P.admissible_u();
    rep.admissible_v = P.admissible_v();
    const double eps = tol.abs;
    const double ls = P.lambda * P.sigma;

    if (2.0 * P.p * P.alpha >= P.n + 2.0 - eps) {
        rep.region = Region::CriticalCase;
        rep.outcome = outcome_for(rep.region, ls);
        rep.boundary_note = ls >= 1.0 ? "2p*alpha >= n+2 with lambda*sigma >= 1"
                                      : "2p*alpha >= n+2 with lambda*sigma < 1";
        return rep;
    }

    const double nu_l = nu(P.lambda, P.n, P.p, P.q, P.alpha, P.beta);
    rep.nu_at_lambda = nu_l;
    if (P.sigma > nu_l + eps) {
        rep.region = Region::OffDomain;
        rep.outcome = Outcome::NoResult;
        rep.boundary_note = "sigma > nu(lambda): parameters are not normalized";
        return rep;
    }
    // Normalized and 2p alpha < n+2 imply 2q beta < n+2.
    const double mu_l = mu(P.lambda, P.n, P.p, P.alpha, P.beta);
    const auto cp = critical_point(P.n, P.p, P.q, P.alpha, P.beta);
    rep.mu_at_lambda = mu_l;
    rep.lambda0 = cp.lambda0;
    rep.sigma0 = cp.sigma0;
    const bool on_nu = std::abs(P.sigma - nu_l) <= eps;

    if (P.sigma < 1.0 / P.lambda - eps) {
        rep.region = Region::B;
        if (on_nu) rep.boundary_note = "sigma = nu(lambda) assigned to B";
    } else if (std::abs(P.sigma - mu_l) <= eps && P.lambda >= cp.lambda0 - eps) {
        rep.region = Region::E;
        rep.boundary_note = "sigma = mu(lambda) with lambda >= lambda0";
    } else if (P.sigma < mu_l) {
        rep.region = Region::A;
        if (std::abs(P.sigma - 1.0 / P.lambda) <= eps) {
            rep.boundary_note = "sigma = 1/lambda assigned to A";
        } else if (on_nu) {
            rep.boundary_note = "sigma = nu(lambda) assigned to A";
        }
    } else if (P.sigma <= cp.sigma0 + eps) {
        rep.region = Region::C;
        if (std::abs(P.sigma - cp.sigma0) <= eps) rep.boundary_note = "sigma = sigma0 assigned to C";
    } else {
        rep.region = Region::D;
        if (on_nu) rep.boundary_note = "sigma = nu(lambda) assigned to D";
    }
    rep.outcome = outcome_for(rep.region, ls);

    if (rep.region == Region::C || rep.region == Region::D) {
        const auto be = blowup_exponents(P);
        rep.r0 = be.r0;
        rep.s0_large_time = be.s0_large;
        rep.s0_small_time = be.s0_small;
    }
    return rep;
}

RegimeReport classify(const ProblemParams& params, RegimeTolerance tol) {
    const auto norm = normalize(params, tol);
    auto rep = classify_region(norm.params, tol);
    rep.swapped = norm.swapped;
    return rep;
}

}  // namespace fracheat

#include "fracheat/sharp_bounds.hpp"

#include <cmath>
#include <limits>

#include "fracheat/errors.hpp"
#include "fracheat/special.hpp"

namespace fracheat {

namespace {

void require_subcritical_product(double lambda, double sigma) {
    const double ls = lambda * sigma;
    if (!(ls < 1.0)) throw DomainError("requires lambda * sigma < 1");
    if (ls > kLambdaSigmaRefuse) {
        throw DomainError("lambda * sigma too close to 1 for double precision");
    }
}

}  // namespace

Exponents exponents(double lambda, double sigma, double alpha, double beta) {
    if (!(lambda > 0.0) || !(sigma > 0.0) || !(alpha > 0.0) || !(beta > 0.0)) {
        throw DomainError("exponents: lambda, sigma, alpha, beta must be > 0");
    }
    require_subcritical_product(lambda, sigma);
    const double d = 1.0 - lambda * sigma;
    return {(beta + alpha * sigma) * lambda / d, (alpha + beta * lambda) * sigma / d};
}

SharpConstants sharp_constants(const ProblemParams& params) {
    params.validate();
    const double l = params.lambda, s = params.sigma, a = params.alpha, b = params.beta;
    const auto e = exponents(l, s, a, b);
    SharpConstants c;
    c.gamma1 = e.gamma1;
    c.gamma2 = e.gamma2;
    const double lg1 = log_gamma(e.gamma1 + 1.0);
    const double lg2 = log_gamma(e.gamma2 + 1.0);
    const double lga1 = log_gamma(a + e.gamma1 + 1.0);
    const double lgb2 = log_gamma(b + e.gamma2 + 1.0);
    c.log_M1 = lg1 - lga1 + (lg2 - lgb2) / s;
    c.log_M2 = lg2 - lgb2 + (lg1 - lga1) / l;
    c.log_B = log_gamma(a * s + 1.0) - s * log_gamma(a + 1.0) - log_gamma(b + a * s + 1.0);
    c.M1 = std::exp(c.log_M1);
    c.M2 = std::exp(c.log_M2);
    c.B = std::exp(c.log_B);
    const double d = 1.0 - l * s;
    c.kappa = l * s / d;
    const double lk1 = (std::log(params.K1) + l * std::log(params.K2)) / d;  // ln (K1 K2^l)^{1/d}
    const double lk2 = (std::log(params.K2) + s * std::log(params.K1)) / d;  // ln (K2 K1^s)^{1/d}
    c.f_coef = std::exp(lk1 + c.kappa * c.log_M1);
    c.g_coef = std::exp(lk2 + c.kappa * c.log_M2);
    c.u_coef = std::exp(lk1 + l / d * c.log_M2);
    c.v_coef = std::exp(lk2 + s / d * c.log_M1);
    c.near_boundary = l * s > kLambdaSigmaWarn;
    return c;
}

double Envelopes::f(double T) const { return T > 0.0 ? c.f_coef * std::pow(T, c.gamma1) : 0.0; }
double Envelopes::g(double T) const { return T > 0.0 ? c.g_coef * std::pow(T, c.gamma2) : 0.0; }
double Envelopes::u(double T) const {
    return T > 0.0 ? c.u_coef * std::pow(T, c.gamma2 / sigma) : 0.0;
}
double Envelopes::v(double T) const {
    return T > 0.0 ? c.v_coef * std::pow(T, c.gamma1 / lambda) : 0.0;
}

Envelopes envelopes(const ProblemParams& params) {
    return Envelopes{sharp_constants(params), params.lambda, params.sigma};
}

DeltaIteration delta_iteration(const ProblemParams& params, int steps) {
    if (steps < 1) throw DomainError("delta_iteration: steps must be >= 1");
    const auto c = sharp_constants(params);
    const double l = params.lambda, s = params.sigma;
    const double ls = l * s;
    const double k = params.K1 * std::pow(params.K2, l);
    DeltaIteration it;
    it.limit = c.f_coef;
    it.rate = ls;
    double d = k * std::exp(l / (1.0 - ls) * c.log_B);
    it.delta.push_back(d);
    for (int j = 1; j < steps; ++j) {
        d = k * std::pow(d * c.M1, ls);
        it.delta.push_back(d);
    }
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * it.limit;
    for (std::size_t j = 0; j + 1 < it.delta.size(); ++j) {
        const double e0 = std::abs(it.delta[j] - it.limit);
        const double e1 = std::abs(it.delta[j + 1] - it.limit);
        if (e0 > 1e6 * floor && e1 > floor) it.observed_rate = e1 / e0;
    }
    return it;
}

TimePair exact_pair(const ProblemParams& params) {
    const auto c = sharp_constants(params);
    return {TimeProfile::power(c.f_coef, c.gamma1), TimeProfile::power(c.g_coef, c.gamma2)};
}

}  // namespace fracheat

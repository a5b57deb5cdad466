#pragma once

#include <vector>

#include "fracheat/params.hpp"
#include "fracheat/potential.hpp"

namespace fracheat {

/// Instances with lambda*sigma above this are refused: the exponents and
/// Gamma arguments are no longer representable.
inline constexpr double kLambdaSigmaRefuse = 1.0 - 1e-6;
/// Instances with lambda*sigma above this carry a proximity warning.
inline constexpr double kLambdaSigmaWarn = 1.0 - 1e-3;

struct Exponents {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
};

/// gamma1 = (beta + alpha sigma) lambda / (1 - lambda sigma),
/// gamma2 = (alpha + beta lambda) sigma / (1 - lambda sigma).
[[nodiscard]] Exponents exponents(double lambda, double sigma, double alpha, double beta);

struct SharpConstants {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double M1 = 0.0;
    double M2 = 0.0;
    double B = 0.0;
    double log_M1 = 0.0;
    double log_M2 = 0.0;
    double log_B = 0.0;
    /// lambda sigma / (1 - lambda sigma).
    double kappa = 0.0;
    /// Envelope coefficients with K1, K2 folded in:
    ///   ||f||_inf(0,T) <= f_coef T^gamma1,        ||g||_inf(0,T) <= g_coef T^gamma2,
    ///   ||J_a f||_inf(0,T) <= u_coef T^{gamma2/sigma}, ||J_b g||_inf(0,T) <= v_coef T^{gamma1/lambda}.
    double f_coef = 0.0;
    double g_coef = 0.0;
    double u_coef = 0.0;
    double v_coef = 0.0;
    bool near_boundary = false;
};

/// M1, M2, B and the envelope coefficients, all evaluated in log space.
[[nodiscard]] SharpConstants sharp_constants(const ProblemParams& params);

struct Envelopes {
    SharpConstants c;
    double lambda = 1.0;
    double sigma = 1.0;

    [[nodiscard]] double f(double T) const;
    [[nodiscard]] double g(double T) const;
    [[nodiscard]] double u(double T) const;
    [[nodiscard]] double v(double T) const;
};

[[nodiscard]] Envelopes envelopes(const ProblemParams& params);

struct DeltaIteration {
    std::vector<double> delta;  // delta_1, delta_2, ...
    double limit = 0.0;         // (K1 K2^lambda)^{1/(1-lambda sigma)} M1^{kappa}
    double rate = 0.0;          // lambda sigma
    /// |delta_{j+1} - L| / |delta_j - L| at the last step where the error is
    /// still resolvable in double precision; 0 if none.
    double observed_rate = 0.0;
};

/// delta_1 = K1 K2^lambda B^{lambda/(1-lambda sigma)},
/// delta_{j+1} = K1 K2^lambda (delta_j M1)^{lambda sigma}.
[[nodiscard]] DeltaIteration delta_iteration(const ProblemParams& params, int steps);

struct TimePair {
    TimeProfile F;
    TimeProfile G;
};

/// F(t) = f_coef t^gamma1, G(t) = g_coef t^gamma2 for t > 0: the pair solving
/// F = K1 (J_beta G)^lambda and G = K2 (J_alpha F)^sigma with equality.
[[nodiscard]] TimePair exact_pair(const ProblemParams& params);

}  // namespace fracheat

#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace fracheat {

/// One instance of the inequality system
///   0 <= f <= K1 (J_beta g)^lambda,  0 <= g <= K2 (J_alpha f)^sigma,
/// with f = g = 0 for t < 0.
struct ProblemParams {
    int n = 1;
    double p = 1.0;
    double q = 1.0;
    double alpha = 0.5;
    double beta = 0.5;
    double lambda = 1.0;
    double sigma = 1.0;
    double K1 = 1.0;
    double K2 = 1.0;

    /// Throws DomainError unless n >= 1, p,q >= 1 and all other fields > 0.
    void validate() const;

    /// (p, alpha) admissible for the fractional heat operator; stored, not enforced.
    [[nodiscard]] bool admissible_u() const;
    [[nodiscard]] bool admissible_v() const;

    /// Exchange the roles (lambda, alpha, p, K1) <-> (sigma, beta, q, K2).
    [[nodiscard]] ProblemParams swapped() const;

    bool operator==(const ProblemParams&) const = default;
};

enum class ValidityClass { Admissible, Critical, Supercritical, Invalid };

enum class Region { A, B, C, D, E, CriticalCase, OffDomain };

enum class Outcome { OnlyTrivial, SharpBounds, NoBounds, NoResult };

[[nodiscard]] std::string_view to_string(ValidityClass v);
[[nodiscard]] std::string_view to_string(Region r);
[[nodiscard]] std::string_view to_string(Outcome o);

/// Absolute tolerance used to detect boundary ties (sigma = 1/lambda,
/// sigma = mu(lambda), 2 p alpha = n + 2, ...).
struct RegimeTolerance {
    double abs = 1e-12;
};

struct NormalizeResult {
    ProblemParams params;
    bool swapped = false;
};

/// Ensure (n+2-2p alpha) q^2 sigma <= (n+2-2q beta) p^2 lambda, swapping the
/// two unknowns if needed. Idempotent.
[[nodiscard]] NormalizeResult normalize(const ProblemParams& params,
                                        RegimeTolerance tol = {});

[[nodiscard]] ValidityClass validity_class(double p, double alpha, int n,
                                           RegimeTolerance tol = {});

/// mu(lambda) = 2 p beta / (n+2-2p alpha) + (n+2) / ((n+2-2p alpha) lambda).
[[nodiscard]] double mu(double lambda, int n, double p, double alpha, double beta);

/// nu(lambda) = (n+2-2q beta) p^2 / ((n+2-2p alpha) q^2) * lambda.
[[nodiscard]] double nu(double lambda, int n, double p, double q, double alpha,
                        double beta);

struct CriticalPoint {
    double lambda0;
    double sigma0;
};

/// Intersection of sigma = mu(lambda) and sigma = nu(lambda).
[[nodiscard]] CriticalPoint critical_point(int n, double p, double q, double alpha,
                                           double beta);

struct BlowupExponents {
    double r0;
    double s0_large;
    double s0_small;
};

/// Thresholds of the small-time and large-time blow-up theorems.
/// Requires lambda sigma > 1.
[[nodiscard]] BlowupExponents blowup_exponents(const ProblemParams& params);

struct RegimeReport {
    Region region = Region::OffDomain;
    Outcome outcome = Outcome::NoResult;
    std::optional<double> mu_at_lambda;
    std::optional<double> nu_at_lambda;
    std::optional<double> lambda0;
    std::optional<double> sigma0;
    std::optional<double> r0;
    std::optional<double> s0_large_time;
    std::optional<double> s0_small_time;
    bool swapped = false;
    bool admissible_u = false;
    bool admissible_v = false;
    /// Which boundary, if any, the point was found on.
    std::string boundary_note;
};

/// Classify the parameters as given (no normalization). A point that fails
/// the normalization inequality is labelled OffDomain.
[[nodiscard]] RegimeReport classify_region(const ProblemParams& params,
                                           RegimeTolerance tol = {});

/// normalize() followed by classify_region(); the report records the swap.
[[nodiscard]] RegimeReport classify(const ProblemParams& params,
                                    RegimeTolerance tol = {});

[[nodiscard]] Outcome outcome_for(Region region, double lambda_sigma);

}  // namespace fracheat

#pragma once

#include <optional>
#include <variant>
#include <vector>

namespace fracheat {

/// c * (t - origin)^exponent on [lo, hi), or c * (origin - t)^exponent when
/// reflected. hi may be +infinity.
struct PowerPiece {
    double lo = 0.0;
    double hi = 0.0;
    double coef = 1.0;
    double exponent = 0.0;
    double origin = 0.0;
    bool reflected = false;

    bool operator==(const PowerPiece&) const = default;
};

/// C-infinity transition from 1 (t <= start) to 0 (t >= start + width).
struct SmoothCutoff {
    double start = 1.0;
    double width = 0.5;

    [[nodiscard]] double operator()(double t) const;
    bool operator==(const SmoothCutoff&) const = default;
};

/// Sum of power pieces, optionally multiplied by a smooth cutoff. Vanishes
/// outside the pieces, in particular for t < 0.
struct TimeProfile {
    std::vector<PowerPiece> pieces;
    std::optional<SmoothCutoff> cutoff;

    [[nodiscard]] double operator()(double t) const;
    /// Piece edges, origins and cutoff edges.
    [[nodiscard]] std::vector<double> breakpoints() const;

    /// c * t^exponent for t > 0.
    static TimeProfile power(double coef, double exponent);
    /// The constant c on [a, b).
    static TimeProfile indicator(double a, double b, double c = 1.0);

    bool operator==(const TimeProfile&) const = default;
};

struct Constant1 {
    bool operator==(const Constant1&) const = default;
};

/// phi(eps x)^power with phi(x) = exp(-(sqrt(1 + |x|^2) - 1)).
struct ExpPhi {
    double eps = 1.0;
    double power = 1.0;
    bool operator==(const ExpPhi&) const = default;
};

/// Indicator of |x|^2 < t - origin (forward) or |x|^2 < origin - t (reflected).
struct Paraboloid {
    double origin = 0.0;
    bool reflected = false;
    bool operator==(const Paraboloid&) const = default;
};

using RadialProfile = std::variant<Constant1, ExpPhi, Paraboloid>;

[[nodiscard]] double radial_value(const RadialProfile& profile, double x_norm, double t);

struct SeparableTerm {
    RadialProfile spatial;
    TimeProfile temporal;
    bool operator==(const SeparableTerm&) const = default;
};

/// Samples on a time x radial-shell lattice. Shell k covers
/// [shell_edges[k], shell_edges[k+1]); the last shell extends to infinity.
/// Piecewise linear in time between nodes, zero outside [times.front(), times.back()].
/// With power_law set, a segment between positive values is v_i (t / t_i)^p
/// instead, and a first segment starting at t = 0 continues the power law of
/// the next one; power profiles are then represented exactly.
struct GridFunction {
    std::vector<double> times;
    std::vector<double> shell_edges;  // shell_edges[0] == 0
    std::vector<double> values;       // row-major: values[i * shells + k]
    bool power_law = false;

    [[nodiscard]] std::size_t shells() const { return shell_edges.size(); }
    [[nodiscard]] std::size_t shell_of(double x_norm) const;
    [[nodiscard]] double at(double x_norm, double t) const;
    [[nodiscard]] double& value(std::size_t time_index, std::size_t shell) {
        return values[time_index * shells() + shell];
    }
    [[nodiscard]] double value(std::size_t time_index, std::size_t shell) const {
        return values[time_index * shells() + shell];
    }
    void validate() const;
    bool operator==(const GridFunction&) const = default;
};

using Component = std::variant<SeparableTerm, GridFunction>;

/// Nonnegative function on R^n x R, radial in x:
///   f(x, t) = amplitude * sum_k component_k(x / sqrt(time_scale), t / time_scale).
struct SpaceTimeFunction {
    std::vector<Component> components;
    double amplitude = 1.0;
    double time_scale = 1.0;

    [[nodiscard]] double operator()(double x_norm, double t) const;
    [[nodiscard]] bool is_zero() const { return components.empty() || amplitude == 0.0; }

    static SpaceTimeFunction separable(RadialProfile spatial, TimeProfile temporal);
    static SpaceTimeFunction grid(GridFunction g);
    /// Sum of components; both operands must share amplitude and time scale
    /// or the result is expressed with the first operand's scale folded in.
    [[nodiscard]] SpaceTimeFunction plus(const SpaceTimeFunction& other) const;

    bool operator==(const SpaceTimeFunction&) const = default;
};

struct QuadratureConfig {
    /// Node budget per time integral (translated into tanh-sinh levels).
    int time_nodes = 6000;
    /// Split time integrals at profile breakpoints and treat endpoint
    /// singularities with distance-aware nodes.
    bool singularity_split = true;
    /// Gaussian window, in standard deviations, for spatial integrals.
    double spatial_truncation = 8.0;
    /// Twice the Gauss-Legendre panel order for smooth spatial profiles.
    int spatial_nodes = 48;
    double target_rel_tol = 1e-10;

    void validate() const;
};

/// Gamma(gamma+1)/Gamma(alpha+gamma+1) t^{alpha+gamma}: J_alpha of t^gamma.
[[nodiscard]] double rl_power(double gamma, double t, double alpha);

/// int_0^t (t - s)^{alpha-1}/Gamma(alpha) profile(s) ds. Power pieces are
/// integrated exactly through the incomplete Beta function; cutoff bands and
/// reflected pieces by endpoint-singular quadrature.
[[nodiscard]] double rl_integral(const TimeProfile& profile, double t, double alpha,
                                 const QuadratureConfig& cfg = {});

/// J_alpha f at a point with |x| = x_norm.
[[nodiscard]] double j_alpha(const SpaceTimeFunction& f, double x_norm, double t, double alpha,
                             int n, const QuadratureConfig& cfg = {});

/// Minimum over |x|^2 < t, t/4 < s < 3t/4 of the heat mass that the ball
/// |xi|^2 < s sends to x in time t - s. Scale free; cached per n.
[[nodiscard]] double paraboloid_c_n(int n);

/// Minimum over s < t <= T, |x| <= sqrt(T - t) of the heat mass that the
/// ball |xi| < sqrt(T - s) sends to x in time t - s. Cached per n.
[[nodiscard]] double reversed_paraboloid_c_n(int n);

/// paraboloid_c_n(n) * int_{t/4}^{3t/4} (t-s)^{alpha-1}/Gamma(alpha) s^g ds:
/// a lower bound for J_alpha(s^g chi_{|xi|^2 < s}) on |x|^2 < t.
[[nodiscard]] double j_alpha_lower_paraboloid(double t, double alpha, double time_exponent, int n);

struct SupBoundReport {
    double bound = 0.0;    // (b-a)^alpha / Gamma(alpha+1) * sup f
    double max_j = 0.0;    // largest sampled J_alpha f on (a, b]
    double margin = 0.0;   // bound - max_j
};

/// Check sup J_alpha f <= (b-a)^alpha/Gamma(alpha+1) sup f on sampled points
/// of R^n x (a, b]. f must vanish before a; f_sup is an upper bound of f on (a, b).
[[nodiscard]] SupBoundReport sup_bound_check(const SpaceTimeFunction& f, double a, double b,
                                             double alpha, int n, double f_sup,
                                             const std::vector<double>& radii,
                                             const std::vector<double>& times,
                                             const QuadratureConfig& cfg = {});

}  // namespace fracheat

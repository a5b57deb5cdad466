#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fracheat::quad {

/// Integrand for endpoint-aware rules: f(x, x - a, b - x). The two distances
/// are computed without cancellation, so integrands with algebraic endpoint
/// singularities such as (b - x)^(alpha - 1) stay accurate near b.
using EndpointIntegrand = std::function<double(double x, double from_left, double to_right)>;

struct Result {
    double value = 0.0;
    double error = 0.0;
    bool converged = false;
    int evaluations = 0;
};

struct TanhSinhOptions {
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    int max_level = 9;
};

/// Double-exponential (tanh-sinh) quadrature over a finite interval with
/// level-by-level step halving. Handles integrable power singularities at
/// either endpoint.
[[nodiscard]] Result tanh_sinh(const EndpointIntegrand& f, double a, double b,
                               TanhSinhOptions opts = {});

/// Gauss-Legendre rule on [-1, 1]. Cached per order; safe to call concurrently.
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
[[nodiscard]] const Rule& gauss_legendre(int order);

/// Gauss-Hermite rule for the weight exp(-x^2) on the real line.
[[nodiscard]] const Rule& gauss_hermite(int order);

/// Generalized Gauss-Laguerre rule for the weight x^a exp(-x) on (0, inf), a > -1.
[[nodiscard]] const Rule& gauss_laguerre(int order, double a);

/// Integrate a smooth function over [a, b] with a fixed Gauss-Legendre rule.
template <class F>
double gl_integrate(F&& f, double a, double b, int order = 64) {
    const Rule& r = gauss_legendre(order);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i) s += r.weights[i] * f(mid + half * r.nodes[i]);
    return s * half;
}

}  // namespace fracheat::quad

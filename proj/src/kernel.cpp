#include "fracheat/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracheat/errors.hpp"
#include "fracheat/quadrature.hpp"
#include "fracheat/special.hpp"

namespace fracheat {

namespace {
// Gaussian window half-width in units of sqrt(4 s); exp(-81) is far below
// every tolerance used here.
constexpr double kWindow = 9.0;
}  // namespace

double phi_log(double x_norm_sq, double t, double alpha, int n) {
    if (!(alpha > 0.0) || n < 1) throw DomainError("phi: requires alpha > 0, n >= 1");
    if (!(t > 0.0)) return -std::numeric_limits<double>::infinity();
    return (alpha - 1.0) * std::log(t) - log_gamma(alpha) -
           0.5 * n * std::log(4.0 * std::numbers::pi * t) - x_norm_sq / (4.0 * t);
}

double phi(double x_norm_sq, double t, double alpha, int n) {
    if (!(t > 0.0)) {
        if (!(alpha > 0.0) || n < 1) throw DomainError("phi: requires alpha > 0, n >= 1");
        return 0.0;
    }
    return std::exp(phi_log(x_norm_sq, t, alpha, n));
}

double spatial_mass(double t, double alpha) {
    if (!(alpha > 0.0)) throw DomainError("spatial_mass: alpha must be > 0");
    if (!(t > 0.0)) return 0.0;
    return std::exp((alpha - 1.0) * std::log(t) - log_gamma(alpha));
}

double spacetime_mass(double a, double b, double alpha) {
    if (a < 0.0 || !(b > a)) throw DomainError("spacetime_mass: requires 0 <= a < b");
    if (!(alpha > 0.0)) throw DomainError("spacetime_mass: alpha must be > 0");
    return (std::pow(b, alpha) - std::pow(a, alpha)) / gamma_fn(alpha + 1.0);
}

double truncated_spatial_mass(double offset_norm, double radius, double elapsed, int n) {
    if (!(elapsed > 0.0)) throw DomainError("truncated_spatial_mass: elapsed must be > 0");
    if (radius < 0.0 || offset_norm < 0.0 || n < 1) {
        throw DomainError("truncated_spatial_mass: invalid radius, offset or dimension");
    }
    if (radius == 0.0) return 0.0;
    if (std::isinf(radius)) return 1.0;
    const double c = std::sqrt(4.0 * elapsed);
    const double d = offset_norm;
    if (n == 1) {
        if (d > radius) {
            const double z0 = d / c, w = radius / c;
            if (w <= 0.5) {
                // Short window around z0: relative accuracy survives radius -> 0.
                const double m = quad::gl_integrate(
                    [z0](double y) { return std::exp(-(z0 + y) * (z0 + y)); }, -w, w, 24);
                return std::clamp(m / std::sqrt(std::numbers::pi), 0.0, 1.0);
            }
            return std::clamp(0.5 * (std::erfc(z0 - w) - std::erfc(z0 + w)), 0.0, 1.0);
        }
        return std::clamp(0.5 * (std::erf((radius - d) / c) + std::erf((radius + d) / c)), 0.0, 1.0);
    }
    if (d == 0.0) return gaussian_ball_mass(radius / c, n);

    // Integrate along the axis through x: the Gaussian in that coordinate
    // times the (n-1)-dimensional Gaussian mass of the slice disc.
    const double lo = std::max(-radius, d - kWindow * c);
    const double hi = std::min(radius, d + kWindow * c);
    if (!(hi > lo)) return 0.0;
    const double th_lo = std::asin(std::clamp(lo / radius, -1.0, 1.0));
    const double th_hi = std::asin(std::clamp(hi / radius, -1.0, 1.0));
    const double inv = 1.0 / (c * std::sqrt(std::numbers::pi));
    const double slice_dim = 0.5 * (n - 1);
    auto integrand = [&](double th) {
        const double y = radius * std::sin(th);
        const double z = (y - d) / c;
        const double slice_r = radius * std::cos(th) / c;
        const double slice = (n == 2) ? std::erf(slice_r) : gamma_p(slice_dim, slice_r * slice_r);
        return inv * std::exp(-z * z) * slice * radius * std::cos(th);
    };
    // Split so each panel holds a few Gaussian widths.
    const int panels = std::clamp(static_cast<int>((hi - lo) / (3.0 * c)) + 1, 1, 8);
    double sum = 0.0;
    const double step = (th_hi - th_lo) / panels;
    for (int k = 0; k < panels; ++k) {
        sum += quad::gl_integrate(integrand, th_lo + k * step, th_lo + (k + 1) * step, 48);
    }
    return std::clamp(sum, 0.0, 1.0);
}

double exterior_spatial_mass(double offset_norm, double radius, double elapsed, int n) {
    if (!(elapsed > 0.0)) throw DomainError("exterior_spatial_mass: elapsed must be > 0");
    if (radius < 0.0 || offset_norm < 0.0 || n < 1) {
        throw DomainError("exterior_spatial_mass: invalid radius, offset or dimension");
    }
    const double d = offset_norm;
    if (d >= radius) return 1.0 - truncated_spatial_mass(d, radius, elapsed, n);
    if (std::isinf(radius)) return 0.0;
    const double c = std::sqrt(4.0 * elapsed);
    if (d == 0.0) return gaussian_ball_tail(radius / c, n);
    // Axial mass beyond the slab |y| < radius.
    const double slab = 0.5 * (std::erfc((radius - d) / c) + std::erfc((radius + d) / c));
    if (n == 1) return std::clamp(slab, 0.0, 1.0);

    // Inside the slab: the Gaussian in y times the slice mass outside the disc.
    const double lo = std::max(-radius, d - kWindow * c);
    const double hi = std::min(radius, d + kWindow * c);
    const double th_lo = std::asin(std::clamp(lo / radius, -1.0, 1.0));
    const double th_hi = std::asin(std::clamp(hi / radius, -1.0, 1.0));
    const double inv = 1.0 / (c * std::sqrt(std::numbers::pi));
    const double slice_dim = 0.5 * (n - 1);
    auto integrand = [&](double th) {
        const double y = radius * std::sin(th);
        const double z = (y - d) / c;
        const double slice_r = radius * std::cos(th) / c;
        const double slice = (n == 2) ? std::erfc(slice_r) : gamma_q(slice_dim, slice_r * slice_r);
        if (slice == 0.0) return 0.0;
        return inv * std::exp(-z * z) * slice * radius * std::cos(th);
    };
    const int panels = std::clamp(static_cast<int>((hi - lo) / (3.0 * c)) + 1, 1, 8);
    double sum = 0.0;
    const double step = (th_hi - th_lo) / panels;
    for (int k = 0; k < panels; ++k) {
        sum += quad::gl_integrate(integrand, th_lo + k * step, th_lo + (k + 1) * step, 48);
    }
    return std::clamp(slab + sum, 0.0, 1.0);
}

}  // namespace fracheat

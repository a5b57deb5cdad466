#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "fracheat/errors.hpp"
#include "fracheat/kernel.hpp"
#include "fracheat/quadrature.hpp"
#include "fracheat/special.hpp"

using namespace fracheat;

namespace {

// int over |x| < 10 sqrt(t), t in (0, T) of phi, by radial and time
// quadrature. Radii are scaled as r = sqrt(t) rho to keep phi representable.
double spacetime_quadrature(double T, double alpha, int n) {
    const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
    auto space = [&](double t) {
        double s = 0.0;
        for (int k = 0; k < 8; ++k) {
            s += quad::gl_integrate(
                [&](double rho) {
                    return sphere * std::pow(rho, n - 1) *
                           std::exp(phi_log(t * rho * rho, t, alpha, n) + 0.5 * n * std::log(t));
                },
                10.0 * k / 8.0, 10.0 * (k + 1) / 8.0, 48);
        }
        return s;
    };
    auto f = [&](double t, double, double) { return space(t); };
    return quad::tanh_sinh(f, 0.0, T, {.rel_tol = 1e-10, .abs_tol = 0.0, .max_level = 8}).value;
}

}  // namespace

TEST_CASE("phi values") {
    CHECK(phi(0, 1, 1, 1) == doctest::Approx(1.0 / std::sqrt(4.0 * std::numbers::pi)).epsilon(1e-15));
    CHECK(phi(0, 1, 0.5, 1) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-14));
    CHECK(phi(3.0, -1.0, 0.5, 2) == 0.0);
    CHECK(phi(3.0, 0.0, 0.5, 2) == 0.0);
    CHECK(phi(3.0, 0.2, 0.5, 2) > 0.0);
    CHECK(std::isinf(phi_log(1.0, -2.0, 1.0, 1)));
    CHECK(std::log(phi(0.7, 1.3, 0.8, 3)) == doctest::Approx(phi_log(0.7, 1.3, 0.8, 3)).epsilon(1e-14));
    CHECK_THROWS_AS((void)phi(0, 1, 0, 1), DomainError);
}

TEST_CASE("masses") {
    CHECK(spatial_mass(1, 1) == doctest::Approx(1.0));
    CHECK(spatial_mass(4, 0.5) == doctest::Approx(1.0 / (2.0 * std::sqrt(std::numbers::pi))).epsilon(1e-14));
    CHECK(spatial_mass(-3, 0.7) == 0.0);
    CHECK(spacetime_mass(0, 1, 0.5) == doctest::Approx(1.1283791670955126).epsilon(1e-14));
    CHECK(spacetime_mass(0, 3.5, 1.0) == doctest::Approx(3.5).epsilon(1e-14));
    const double eps = 1e-7;
    CHECK(spacetime_mass(1, 1 + eps, 0.6) / eps == doctest::Approx(0.6 / std::tgamma(1.6)).epsilon(1e-6));
    CHECK_THROWS_AS((void)spacetime_mass(-1, 1, 1), DomainError);
    CHECK_THROWS_AS((void)spacetime_mass(2, 1, 1), DomainError);
}

TEST_CASE("space-time mass identity by quadrature") {
    for (double alpha : {0.25, 0.5, 1.0, 2.0}) {
        for (int n = 1; n <= 3; ++n) {
            const double T = 1.7;
            CHECK(spacetime_quadrature(T, alpha, n) == doctest::Approx(spacetime_mass(0, T, alpha)).epsilon(1e-6));
        }
    }
}

TEST_CASE("truncated spatial mass") {
    for (int n = 1; n <= 4; ++n) {
        CHECK(truncated_spatial_mass(0.0, std::numeric_limits<double>::infinity(), 1.0, n) == 1.0);
        CHECK(truncated_spatial_mass(0.0, 1e6, 1.0, n) == doctest::Approx(1.0).epsilon(1e-14));
        const double s = 0.3;
        CHECK(truncated_spatial_mass(0.0, std::sqrt(4 * s), s, n) ==
              doctest::Approx(gaussian_ball_mass(1.0, n)).epsilon(1e-14));
        // Far-away ball receives almost nothing; mass lies in [0, 1].
        CHECK(truncated_spatial_mass(20.0, 1.0, 0.1, n) <= 1e-12);
        for (double d : {0.0, 0.3, 0.9, 1.5}) {
            const double m = truncated_spatial_mass(d, 1.0, 0.25, n);
            CHECK(m >= 0.0);
            CHECK(m <= 1.0);
        }
        // Large ball relative to the Gaussian: mass close to 1.
        CHECK(truncated_spatial_mass(0.5, 50.0, 1.0, n) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK_THROWS_AS((void)truncated_spatial_mass(0.0, 1.0, 0.0, n), DomainError);
    }
    // Off-centre n = 2 against direct polar cubature.
    const double d = 0.7, R = 1.1, s = 0.2;
    double ref = 0.0;
    for (int k = 0; k < 4; ++k) {
        ref += quad::gl_integrate(
            [&](double r) {
                return r * quad::gl_integrate(
                               [&](double th) {
                                   const double dx = r * std::cos(th) - d;
                                   const double dy = r * std::sin(th);
                                   return phi(dx * dx + dy * dy, s, 1.0, 2);
                               },
                               0.0, 2.0 * std::numbers::pi, 64);
            },
            R * k / 4.0, R * (k + 1) / 4.0, 48);
    }
    CHECK(truncated_spatial_mass(d, R, s, 2) == doctest::Approx(ref).epsilon(1e-10));
    // n = 3 through the same route, against spherical shells.
    double ref3 = 0.0;
    for (int k = 0; k < 4; ++k) {
        ref3 += quad::gl_integrate(
            [&](double r) {
                return 2.0 * std::numbers::pi * r * r *
                       quad::gl_integrate(
                           [&](double c) { return phi(r * r + d * d - 2 * r * d * c, s, 1.0, 3); }, -1.0, 1.0, 64);
            },
            R * k / 4.0, R * (k + 1) / 4.0, 48);
    }
    CHECK(truncated_spatial_mass(d, R, s, 3) == doctest::Approx(ref3).epsilon(1e-10));
}

TEST_CASE("truncated spatial mass of shrinking balls") {
    // Small-ball limit: |B_r| times the heat density at the centre offset.
    const double s = 0.01;
    for (int n = 1; n <= 3; ++n) {
        for (double d : {0.0, 0.05, 0.25}) {
            for (double r : {1e-8, 1e-30, 1e-150}) {
                const double ref = unit_ball_volume(n) * std::pow(r, n) * phi(d * d, s, 1.0, n);
                if (!(ref > 1e-290)) continue;
                CHECK(truncated_spatial_mass(d, r, s, n) == doctest::Approx(ref).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("heat semigroup keeps unit mass") {
    // Phi_1(., s) * Phi_1(., r) at large R: the ball captures all mass.
    for (int n = 1; n <= 3; ++n) {
        CHECK(truncated_spatial_mass(0.4, 200.0, 0.3 + 0.7, n) == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("exterior spatial mass") {
    // Moderate regime: agrees with the complement.
    for (int n : {1, 2, 3, 4}) {
        for (double d : {0.0, 0.3, 1.4}) {
            const double e = exterior_spatial_mass(d, 1.0, 0.2, n);
            CHECK(e == doctest::Approx(1.0 - truncated_spatial_mass(d, 1.0, 0.2, n)).epsilon(1e-9));
        }
    }
    // Deep interior in the plane: radial integral with I0 outside the disc.
    const double s = 0.01, r = 1.0, c = std::sqrt(4.0 * s);
    for (double d : {0.0, 0.2, 0.5}) {
        auto dens = [&](double rho) {
            const double z = rho * d / (2.0 * s);
            const double i0 = std::cyl_bessel_i(0.0, z) * std::exp(-z);
            return rho * std::exp(-(rho - d) * (rho - d) / (4.0 * s)) * i0 / (2.0 * s);
        };
        double ref = 0.0;
        for (int k = 0; k < 20; ++k) ref += quad::gl_integrate(dens, r + k * c, r + (k + 1) * c, 32);
        INFO("d=" << d << " ref=" << ref);
        CHECK(ref < 1e-3);
        CHECK(exterior_spatial_mass(d, r, s, 2) == doctest::Approx(ref).epsilon(1e-9));
    }
    // Line: closed form in erfc.
    const double e1 = exterior_spatial_mass(0.1, 1.0, 1e-3, 1);
    CHECK(e1 == doctest::Approx(0.5 * (std::erfc(0.9 / std::sqrt(4e-3)) + std::erfc(1.1 / std::sqrt(4e-3))))
                    .epsilon(1e-12));
    CHECK(e1 > 0.0);
    CHECK(exterior_spatial_mass(0.1, 1.0, 1e-3, 3) > 0.0);
    CHECK(exterior_spatial_mass(0.0, 0.0, 1.0, 2) == 1.0);
    CHECK_THROWS_AS((void)exterior_spatial_mass(0.0, 1.0, 0.0, 2), DomainError);
}

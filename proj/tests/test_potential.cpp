#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fracheat/errors.hpp"
#include "fracheat/kernel.hpp"
#include "fracheat/potential.hpp"
#include "fracheat/quadrature.hpp"
#include "fracheat/special.hpp"

using namespace fracheat;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Brute-force J_alpha for n = 1: Gaussian integral over z in a window by
// Gauss-Legendre, time by tanh-sinh on a single interval split at `cuts`.
template <class H, class Support>
double brute_force_1d(H&& h, Support&& support, double x, double t, double alpha,
                      std::vector<double> cuts = {}) {
    auto inner = [&](double tau, double s) {
        const double c = 2.0 * std::sqrt(s);
        auto [lo, hi] = support(tau);
        const double zlo = std::max(-10.0, (lo - x) / c);
        const double zhi = std::min(10.0, (hi - x) / c);
        if (!(zhi > zlo)) return 0.0;
        double sum = 0.0;
        const int panels = 8;
        for (int k = 0; k < panels; ++k) {
            const double a = zlo + (zhi - zlo) * k / panels;
            const double b = zlo + (zhi - zlo) * (k + 1) / panels;
            sum += quad::gl_integrate([&](double z) { return std::exp(-z * z) * h(x + c * z, tau); }, a, b, 40);
        }
        return sum / std::sqrt(std::numbers::pi);
    };
    cuts.push_back(0.0);
    cuts.push_back(t);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double a = std::max(0.0, cuts[i]);
        const double b = std::min(t, cuts[i + 1]);
        if (!(b > a)) continue;
        auto f = [&](double tau, double, double to_b) {
            const double s = (t - b) + to_b;
            return std::pow(s, alpha - 1.0) / std::tgamma(alpha) * inner(tau, s);
        };
        total += quad::tanh_sinh(f, a, b, {.rel_tol = 1e-11, .abs_tol = 0.0, .max_level = 10}).value;
    }
    return total;
}

auto whole_line = [](double) { return std::pair{-kInf, kInf}; };

}  // namespace

TEST_CASE("rl_power examples") {
    CHECK(rl_power(0.0, 2.0, 0.7) == doctest::Approx(std::pow(2.0, 0.7) / std::tgamma(1.7)).epsilon(1e-14));
    CHECK(rl_power(1.0, 1.0, 0.5) == doctest::Approx(0.7522527780636751).epsilon(1e-14));
    CHECK_THROWS_AS((void)rl_power(-1.0, 1.0, 0.5), DomainError);
    CHECK(rl_power(0.3, -1.0, 0.5) == 0.0);
}

TEST_CASE("rl_integral reproduces rl_power for random powers") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ug(-0.9, 5.0), ua(0.1, 3.0), lt(std::log(0.01), std::log(100.0));
    for (int i = 0; i < 200; ++i) {
        const double g = ug(rng), a = ua(rng), t = std::exp(lt(rng));
        const double v = rl_integral(TimeProfile::power(1.0, g), t, a);
        CHECK(std::abs(v / rl_power(g, t, a) - 1.0) <= 1e-10);
    }
}

TEST_CASE("rl_integral: indicators, sums, reflected pieces, cutoffs") {
    // 1 on (a, b) seen at t = b: (b - a)^alpha / Gamma(alpha + 1).
    for (double alpha : {0.3, 1.0, 2.4}) {
        const double a = 0.7, b = 2.1;
        CHECK(rl_integral(TimeProfile::indicator(a, b), b, alpha) ==
              doctest::Approx(spacetime_mass(0.0, b - a, alpha)).epsilon(1e-12));
    }
    // Reflected piece (T - s)^e on [0, T) against brute-force quadrature.
    const double T = 1.5, e = 0.6, alpha = 0.4, t = 1.2;
    TimeProfile refl{{PowerPiece{0.0, T, 2.0, e, T, true}}, std::nullopt};
    auto f = [&](double s, double, double to_b) {
        return std::pow(to_b, alpha - 1.0) / std::tgamma(alpha) * 2.0 * std::pow(T - s, e);
    };
    const double ref = quad::tanh_sinh(f, 0.0, t, {.rel_tol = 1e-13, .abs_tol = 0.0, .max_level = 12}).value;
    CHECK(rl_integral(refl, t, alpha) == doctest::Approx(ref).epsilon(1e-10));
    // Sum of pieces is additive.
    TimeProfile two{{PowerPiece{0.0, kInf, 1.0, 0.5}, PowerPiece{0.5, 3.0, 0.3, 1.2, 0.5}}, std::nullopt};
    TimeProfile one{{PowerPiece{0.5, 3.0, 0.3, 1.2, 0.5}}, std::nullopt};
    CHECK(rl_integral(two, 2.0, 0.8) ==
          doctest::Approx(rl_power(0.5, 2.0, 0.8) + rl_integral(one, 2.0, 0.8)).epsilon(1e-12));
    // A cutoff only lowers the value; inside [0, start] nothing changes.
    TimeProfile cut = TimeProfile::power(1.0, 1.5);
    cut.cutoff = SmoothCutoff{1.0, 0.25};
    CHECK(rl_integral(cut, 0.9, 0.6) == doctest::Approx(rl_power(1.5, 0.9, 0.6)).epsilon(1e-12));
    const double full = rl_power(1.5, 1.2, 0.6);
    const double with_cut = rl_integral(cut, 1.2, 0.6);
    CHECK(with_cut < full);
    // J F - J F_delta <= F(1 + delta) delta^alpha / Gamma(alpha + 1) on [1, 1 + delta].
    for (double tt : {1.05, 1.15, 1.25}) {
        const double d = rl_power(1.5, tt, 0.6) - rl_integral(cut, tt, 0.6);
        CHECK(d >= 0.0);
        CHECK(d <= std::pow(1.25, 1.5) * std::pow(0.25, 0.6) / std::tgamma(1.6));
    }
    // Cutoff band against brute force.
    auto h = [&](double s, double, double) {
        return std::pow(1.2 - s, -0.4) / std::tgamma(0.6) * std::pow(s, 1.5) * (*cut.cutoff)(s);
    };
    const double lower = quad::tanh_sinh(h, 0.0, 1.0, {.rel_tol = 1e-13, .abs_tol = 0, .max_level = 12}).value;
    auto h2 = [&](double s, double, double to_b) {
        return std::pow(to_b, -0.4) / std::tgamma(0.6) * std::pow(s, 1.5) * (*cut.cutoff)(s);
    };
    const double upper = quad::tanh_sinh(h2, 1.0, 1.2, {.rel_tol = 1e-13, .abs_tol = 0, .max_level = 12}).value;
    CHECK(with_cut == doctest::Approx(lower + upper).epsilon(1e-10));
}

TEST_CASE("semigroup: J_beta J_alpha = J_{alpha+beta} on powers") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> ug(-0.8, 3.0), ua(0.1, 2.5), ut(0.05, 20.0);
    for (int i = 0; i < 100; ++i) {
        const double g = ug(rng), a = ua(rng), b = ua(rng), t = ut(rng);
        // J_alpha t^g = c t^{a+g}; then J_beta of that profile.
        const double c = rl_power(g, 1.0, a);
        const double composed = rl_integral(TimeProfile::power(c, a + g), t, b);
        CHECK(composed == doctest::Approx(rl_power(g, t, a + b)).epsilon(1e-9));
    }
}

TEST_CASE("j_alpha of spatially constant data") {
    const auto f = SpaceTimeFunction::separable(Constant1{}, TimeProfile::power(2.0, 0.7));
    for (int n = 1; n <= 3; ++n) {
        CHECK(j_alpha(f, 0.4, 1.3, 0.5, n) == doctest::Approx(2.0 * rl_power(0.7, 1.3, 0.5)).epsilon(1e-13));
    }
    CHECK(j_alpha(f, 0.4, -1.0, 0.5, 1) == 0.0);
    // exp-phi with eps = 0 is the constant 1.
    const auto g = SpaceTimeFunction::separable(ExpPhi{0.0, 1.0}, TimeProfile::power(1.0, 0.7));
    CHECK(j_alpha(g, 0.4, 1.3, 0.5, 2) == doctest::Approx(rl_power(0.7, 1.3, 0.5)).epsilon(1e-10));
}

TEST_CASE("j_alpha of exp-phi profiles against brute force") {
    for (double eps : {0.3, 1.0}) {
        for (double power : {1.0, 0.5}) {
            const auto f = SpaceTimeFunction::separable(ExpPhi{eps, power}, TimeProfile::power(1.0, 0.4));
            auto h = [&](double xi, double tau) {
                return std::pow(tau, 0.4) * std::exp(-power * (std::sqrt(1.0 + eps * eps * xi * xi) - 1.0));
            };
            for (double x : {0.0, 0.8, 2.5}) {
                const double ref = brute_force_1d(h, whole_line, x, 1.1, 0.7);
                CHECK(j_alpha(f, x, 1.1, 0.7, 1) == doctest::Approx(ref).epsilon(1e-8));
            }
        }
    }
    // n = 2: against a direct polar cubature of the spatial convolution.
    const double eps = 0.5, t = 0.8, alpha = 1.3, x = 0.6;
    const auto f = SpaceTimeFunction::separable(ExpPhi{eps, 1.0}, TimeProfile::power(1.0, 0.0));
    auto spatial = [&](double s) {
        double sum = 0.0;
        for (int k = 0; k < 6; ++k) {
            sum += quad::gl_integrate(
                [&](double r) {
                    return r * quad::gl_integrate(
                                   [&](double th) {
                                       const double dx = r * std::cos(th) - x;
                                       const double dy = r * std::sin(th);
                                       return phi(dx * dx + dy * dy, s, 1.0, 2) *
                                              std::exp(-(std::sqrt(1.0 + eps * eps * r * r) - 1.0));
                                   },
                                   0.0, 2.0 * std::numbers::pi, 48);
                },
                (x + 12.0 * std::sqrt(s)) * k / 6.0, (x + 12.0 * std::sqrt(s)) * (k + 1) / 6.0, 40);
        }
        return sum;
    };
    auto ft = [&](double, double, double to_b) {
        return std::pow(to_b, alpha - 1.0) / std::tgamma(alpha) * spatial(to_b);
    };
    const double ref = quad::tanh_sinh(ft, 0.0, t, {.rel_tol = 1e-9, .abs_tol = 0, .max_level = 6}).value;
    CHECK(j_alpha(f, x, t, alpha, 2) == doctest::Approx(ref).epsilon(1e-7));

    // n = 3 with a slowly varying profile: spherical shells around the origin.
    const double eps3 = 0.05, x3 = 4.0;
    const auto f3 = SpaceTimeFunction::separable(ExpPhi{eps3, 2.0}, TimeProfile::power(1.0, 0.0));
    auto spatial3 = [&](double s) {
        if (s < 1e-12) return std::exp(-2.0 * (std::sqrt(1.0 + eps3 * eps3 * x3 * x3) - 1.0));
        const double R = x3 + 12.0 * std::sqrt(s);
        double sum = 0.0;
        for (int k = 0; k < 8; ++k) {
            sum += quad::gl_integrate(
                [&](double r) {
                    const double hr = std::exp(-2.0 * (std::sqrt(1.0 + eps3 * eps3 * r * r) - 1.0));
                    // Angular integral of the heat kernel in closed form.
                    const double ang = 2.0 * s / (r * x3) *
                                       (std::exp(-(r - x3) * (r - x3) / (4.0 * s)) -
                                        std::exp(-(r + x3) * (r + x3) / (4.0 * s)));
                    return 2.0 * std::numbers::pi * r * r * hr * ang *
                           std::pow(4.0 * std::numbers::pi * s, -1.5);
                },
                std::max(0.0, x3 - 12.0 * std::sqrt(s)) + (R - std::max(0.0, x3 - 12.0 * std::sqrt(s))) * k / 8.0,
                std::max(0.0, x3 - 12.0 * std::sqrt(s)) +
                    (R - std::max(0.0, x3 - 12.0 * std::sqrt(s))) * (k + 1) / 8.0,
                40);
        }
        return sum;
    };
    auto ft3 = [&](double, double, double to_b) {
        return std::pow(to_b, alpha - 1.0) / std::tgamma(alpha) * spatial3(to_b);
    };
    const double ref3 = quad::tanh_sinh(ft3, 0.0, t, {.rel_tol = 1e-9, .abs_tol = 0, .max_level = 6}).value;
    CHECK(j_alpha(f3, x3, t, alpha, 3) == doctest::Approx(ref3).epsilon(1e-7));
}

TEST_CASE("j_alpha of paraboloid indicators against brute force") {
    const double alpha = 0.6;
    const auto f = SpaceTimeFunction::separable(Paraboloid{0.0, false}, TimeProfile::power(1.0, 0.5));
    auto h = [](double, double tau) { return std::pow(tau, 0.5); };
    auto support = [](double tau) { return std::pair{-std::sqrt(tau), std::sqrt(tau)}; };
    for (double x : {0.0, 0.5, 0.95, 1.6}) {
        const double t = 1.0;
        const double ref = brute_force_1d(h, support, x, t, alpha, {x * x});
        CHECK(j_alpha(f, x, t, alpha, 1) == doctest::Approx(ref).epsilon(1e-8));
    }
    // Reflected paraboloid |xi| < sqrt(T - tau) on [0, T).
    const double T = 2.0;
    TimeProfile ind = TimeProfile::indicator(0.0, T);
    const auto g = SpaceTimeFunction::separable(Paraboloid{T, true}, ind);
    auto support_r = [T](double tau) {
        const double r = std::sqrt(std::max(0.0, T - tau));
        return std::pair{-r, r};
    };
    auto one = [](double, double) { return 1.0; };
    for (double x : {0.0, 0.4, 0.9}) {
        const double t = 1.5;
        const double ref = brute_force_1d(one, support_r, x, t, alpha, {T - x * x});
        CHECK(j_alpha(g, x, t, alpha, 1) == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("linearity and monotonicity") {
    const auto f = SpaceTimeFunction::separable(ExpPhi{0.7, 1.0}, TimeProfile::power(1.0, 0.3));
    const auto g = SpaceTimeFunction::separable(Paraboloid{0.0, false}, TimeProfile::power(0.5, 1.0));
    const auto sum = f.plus(g);
    auto scaled = g;
    scaled.amplitude = 3.0;
    scaled.time_scale = 2.0;
    const auto mixed = f.plus(scaled);
    for (int n = 1; n <= 2; ++n) {
        for (double x : {0.0, 0.7}) {
            for (double t : {0.4, 1.3}) {
                const double jf = j_alpha(f, x, t, 0.8, n);
                const double jg = j_alpha(g, x, t, 0.8, n);
                CHECK(j_alpha(sum, x, t, 0.8, n) == doctest::Approx(jf + jg).epsilon(1e-12));
                CHECK(j_alpha(mixed, x, t, 0.8, n) ==
                      doctest::Approx(jf + j_alpha(scaled, x, t, 0.8, n)).epsilon(1e-9));
                CHECK(mixed(x, t) == doctest::Approx(f(x, t) + scaled(x, t)).epsilon(1e-12));
                CHECK(j_alpha(sum, x, t, 0.8, n) >= jf);
            }
        }
    }
}

TEST_CASE("scaling of the potential") {
    // J_alpha f_T (x, t) = T^alpha J_alpha f (x / sqrt T, t / T).
    auto f = SpaceTimeFunction::separable(ExpPhi{0.9, 1.0}, TimeProfile::power(1.0, 0.8));
    auto fT = f;
    fT.time_scale = 4.0;
    CHECK(j_alpha(fT, 1.0, 2.0, 0.7, 1) ==
          doctest::Approx(std::pow(4.0, 0.7) * j_alpha(f, 0.5, 0.5, 0.7, 1)).epsilon(1e-12));
}

TEST_CASE("grid functions") {
    GridFunction g;
    g.times = {0.0, 0.3, 0.8, 1.5};
    g.shell_edges = {0.0};
    g.values = {0.0, 1.0, 0.4, 2.0};
    const auto f = SpaceTimeFunction::grid(g);
    // Same data as a sum of linear power pieces.
    TimeProfile lin;
    for (std::size_t i = 0; i + 1 < g.times.size(); ++i) {
        const double t0 = g.times[i], t1 = g.times[i + 1];
        const double slope = (g.values[i + 1] - g.values[i]) / (t1 - t0);
        if (slope >= 0) {
            lin.pieces.push_back(PowerPiece{t0, t1, g.values[i], 0.0, t0});
            lin.pieces.push_back(PowerPiece{t0, t1, slope, 1.0, t0});
        } else {
            lin.pieces.push_back(PowerPiece{t0, t1, g.values[i + 1], 0.0, t0});
            lin.pieces.push_back(PowerPiece{t0, t1, -slope, 1.0, t1, true});
        }
    }
    for (double t : {0.2, 0.7, 1.2, 2.5}) {
        CHECK(j_alpha(f, 0.3, t, 0.55, 1) == doctest::Approx(rl_integral(lin, t, 0.55)).epsilon(1e-11));
    }
    // Multi-shell with identical shells equals the single-shell result.
    GridFunction m;
    m.times = g.times;
    m.shell_edges = {0.0, 0.5, 1.2};
    for (double v : g.values) m.values.insert(m.values.end(), {v, v, v});
    const auto fm = SpaceTimeFunction::grid(m);
    for (int n = 1; n <= 3; ++n) {
        CHECK(j_alpha(fm, 0.6, 1.1, 0.55, n) == doctest::Approx(j_alpha(f, 0.6, 1.1, 0.55, n)).epsilon(1e-9));
    }
    // Only the inner shell: brute force in n = 1.
    GridFunction inner = m;
    for (std::size_t i = 0; i < inner.times.size(); ++i) {
        inner.value(i, 1) = 0.0;
        inner.value(i, 2) = 0.0;
    }
    const auto fi = SpaceTimeFunction::grid(inner);
    auto h = [&](double, double tau) { return g.at(0.0, tau); };
    auto support = [](double) { return std::pair{-0.5, 0.5}; };
    CHECK(j_alpha(fi, 0.4, 1.1, 0.55, 1) ==
          doctest::Approx(brute_force_1d(h, support, 0.4, 1.1, 0.55, {0.3, 0.8})).epsilon(1e-8));
    CHECK(f(0.0, 0.55) == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(f(0.0, 1.6) == 0.0);
    GridFunction bad = g;
    bad.values.pop_back();
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("paraboloid constants") {
    for (int n = 1; n <= 3; ++n) {
        const double c = paraboloid_c_n(n);
        CHECK(c > 0.0);
        CHECK(c < 1.0);
        CHECK(paraboloid_c_n(n) == c);
        // Interior point receives more than the corner.
        CHECK(truncated_spatial_mass(0.0, std::sqrt(0.75), 0.25, n) > truncated_spatial_mass(1.0, 0.5, 0.75, n));
        // The minimum is attained on the region: no sampled point goes below it,
        // and the same value comes out at t = 4 after rescaling.
        std::mt19937_64 rng(41 + n);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int i = 0; i < 200; ++i) {
            const double d = u(rng), s = 0.25 + 0.5 * u(rng);
            CHECK(truncated_spatial_mass(d, std::sqrt(s), 1.0 - s, n) >= c - 1e-12);
            CHECK(truncated_spatial_mass(2.0 * d, std::sqrt(4.0 * s), 4.0 * (1.0 - s), n) ==
                  doctest::Approx(truncated_spatial_mass(d, std::sqrt(s), 1.0 - s, n)).epsilon(1e-10));
        }
        const double cr = reversed_paraboloid_c_n(n);
        CHECK(cr > 0.0);
        for (int i = 0; i < 200; ++i) {
            const double e = 1e-6 + (1.0 - 1e-6) * u(rng);
            const double d = u(rng) * std::sqrt(1.0 - e);
            CHECK(truncated_spatial_mass(d, 1.0, e, n) >= cr - 1e-12);
        }
    }
    CHECK_THROWS_AS((void)paraboloid_c_n(0), DomainError);
}

TEST_CASE("paraboloid lower bound") {
    CHECK(j_alpha_lower_paraboloid(1.0, 1.0, 0.0, 1) == doctest::Approx(paraboloid_c_n(1) / 2.0).epsilon(1e-13));
    CHECK(j_alpha_lower_paraboloid(3.0, 0.7, 1.3, 2) / j_alpha_lower_paraboloid(1.0, 0.7, 1.3, 2) ==
          doctest::Approx(std::pow(3.0, 2.0)).epsilon(1e-12));
    // Exponents below -1 go through the fallback rule.
    const double g = -1.4, a = 0.8;
    const double unit = quad::gl_integrate(
        [&](double s) { return std::pow(1.0 - s, a - 1.0) * std::pow(s, g) / std::tgamma(a); }, 0.25, 0.75, 64);
    CHECK(j_alpha_lower_paraboloid(2.0, a, g, 1) ==
          doctest::Approx(paraboloid_c_n(1) * std::pow(2.0, a + g) * unit).epsilon(1e-12));

    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int n = 1; n <= 2; ++n) {
        const double alpha = 0.7, ge = 0.5;
        const auto f = SpaceTimeFunction::separable(Paraboloid{0.0, false}, TimeProfile::power(1.0, ge));
        for (int i = 0; i < 50; ++i) {
            const double t = 0.1 + 3.0 * u(rng);
            const double x = std::sqrt(t) * u(rng);
            CHECK(j_alpha(f, x, t, alpha, n) >= j_alpha_lower_paraboloid(t, alpha, ge, n));
        }
    }
}

TEST_CASE("sup bound") {
    const std::vector<double> radii{0.0, 0.5, 1.0, 2.0};
    const std::vector<double> times{0.6, 0.8, 1.0, 1.5, 2.0};
    const auto c = SpaceTimeFunction::separable(Constant1{}, TimeProfile::indicator(0.5, 2.0, 3.0));
    auto rep = sup_bound_check(c, 0.5, 2.0, 0.7, 1, 3.0, radii, times);
    CHECK(rep.margin == doctest::Approx(0.0).epsilon(1e-12).scale(rep.bound));
    CHECK(rep.margin >= -1e-12 * rep.bound);
    const auto half = SpaceTimeFunction::separable(Paraboloid{0.0, false}, TimeProfile::indicator(0.5, 1.25, 3.0));
    rep = sup_bound_check(half, 0.5, 2.0, 0.7, 1, 3.0, radii, times);
    CHECK(rep.margin > 0.0);
    const SpaceTimeFunction zero;
    rep = sup_bound_check(zero, 0.5, 2.0, 0.7, 1, 0.0, radii, times);
    CHECK(rep.margin == 0.0);
    CHECK(rep.bound == 0.0);
}

TEST_CASE("strongly singular paraboloid powers") {
    // tau^{-xi} chi_{|x|^2 < tau}: J_alpha is self-similar of degree alpha - xi
    // and the near-origin integrand behaves like tau^{n/2 - xi}.
    const double alpha = 0.5, xi = 1.45;
    const auto f = SpaceTimeFunction::separable(Paraboloid{0.0, false}, TimeProfile::power(1.0, -xi));
    for (int n = 1; n <= 2; ++n) {
        for (double y : {0.0, 0.5, 1.3}) {
            const double ref = j_alpha(f, y, 1.0, alpha, n);
            CHECK(std::isfinite(ref));
            CHECK(ref > 0.0);
            for (double t : {1e-40, 1e-3, 7.0, 1e5}) {
                const double v = j_alpha(f, y * std::sqrt(t), t, alpha, n);
                CHECK(v / std::pow(t, alpha - xi) == doctest::Approx(ref).epsilon(1e-8));
            }
        }
    }
    // Against brute force for n = 1, outside the singular corner.
    auto h = [xi](double, double tau) { return tau >= 0.2 ? std::pow(tau, -xi) : 0.0; };
    auto support = [](double tau) { return std::pair{-std::sqrt(tau), std::sqrt(tau)}; };
    const auto fg = SpaceTimeFunction::separable(
        Paraboloid{0.0, false}, TimeProfile{{PowerPiece{0.2, kInf, 1.0, -xi, 0.0, false}}, {}});
    for (double x : {0.0, 0.6}) {
        const double ref = brute_force_1d(h, support, x, 1.0, alpha, {0.2, x * x});
        CHECK(j_alpha(fg, x, 1.0, alpha, 1) == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("reflected power at its tip") {
    // (T - tau)^{-xi} on |x|^2 < T - tau: at (0, T) the integral diverges iff xi >= alpha.
    const double T = 2.0;
    auto make = [T](double xi) {
        return SpaceTimeFunction::separable(Paraboloid{T, true},
                                            TimeProfile{{PowerPiece{1.0, T, 1.0, -xi, T, true}}, {}});
    };
    CHECK(std::isinf(j_alpha(make(0.8), 0.0, T, 0.5, 1)));
    CHECK(std::isinf(j_alpha(make(0.5), 0.0, T, 0.5, 2)));
    const double finite = j_alpha(make(0.3), 0.0, T, 0.5, 1);
    CHECK(std::isfinite(finite));
    CHECK(finite > 0.0);
    // Off the axis the shrinking ball leaves x before the tip.
    CHECK(std::isfinite(j_alpha(make(1.2), 0.3, T, 0.5, 1)));
    // Approaching the tip from below the value grows without bound.
    const auto g = make(0.8);
    double prev = 0.0;
    for (double e : {1e-2, 1e-4, 1e-6}) {
        const double v = j_alpha(g, 0.0, T - e, 0.5, 1);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("power-law grid functions") {
    // Samples of c t^p are reproduced exactly, including the segment at t = 0.
    const double c = 1.7, p = 2.5, alpha = 0.6;
    GridFunction g;
    g.times = {0.0, 0.01, 0.1, 0.4, 1.0};
    g.shell_edges = {0.0};
    for (double t : g.times) g.values.push_back(c * std::pow(t, p));
    g.power_law = true;
    const auto f = SpaceTimeFunction::grid(g);
    for (double t : {0.003, 0.05, 0.7, 1.0}) {
        CHECK(f(0.4, t) == doctest::Approx(c * std::pow(t, p)).epsilon(1e-13));
        CHECK(j_alpha(f, 0.4, t, alpha, 2) == doctest::Approx(c * rl_power(p, t, alpha)).epsilon(1e-11));
    }
    // Two shells: numerical route against the single-shell value.
    GridFunction m = g;
    m.shell_edges = {0.0, 0.7};
    m.values.clear();
    for (double t : g.times) m.values.insert(m.values.end(), {c * std::pow(t, p), c * std::pow(t, p)});
    const auto fm = SpaceTimeFunction::grid(m);
    CHECK(j_alpha(fm, 0.3, 0.9, alpha, 1) == doctest::Approx(c * rl_power(p, 0.9, alpha)).epsilon(1e-9));
    // A zero sample falls back to linear interpolation on its segments.
    GridFunction z = g;
    z.values[2] = 0.0;
    const double w = (0.2 - 0.1) / 0.3;
    CHECK(z.at(0.0, 0.2) == doctest::Approx(w * z.values[3]).epsilon(1e-14));
}

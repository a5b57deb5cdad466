#include "fracheat/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fracheat/errors.hpp"
#include "fracheat/quadrature.hpp"

namespace fracheat {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 2000;

// ln( x^a e^{-x} / Gamma(a) ), the common prefactor of P and Q.
double log_prefactor(double a, double x) { return a * std::log(x) - x - log_gamma(a); }

double gamma_series(double a, double x) {
    double ap = a;
    double del = 1.0 / a;
    double sum = del;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(log_prefactor(a, x));
}

// Q(a, x) by modified Lentz evaluation of the Legendre continued fraction.
double gamma_cf(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return std::exp(log_prefactor(a, x)) * h;
}

double beta_cf(double a, double b, double x) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m < kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma: x must be > 0");
#if defined(__GLIBC__)
    int sign = 0;
    return ::lgamma_r(x, &sign);
#else
    return std::lgamma(x);
#endif
}

double gamma_fn(double x) { return std::exp(log_gamma(x)); }

double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw DomainError("gamma_p: requires a > 0, x >= 0");
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return gamma_series(a, x);
    return 1.0 - gamma_cf(a, x);
}

double gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw DomainError("gamma_q: requires a > 0, x >= 0");
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - gamma_series(a, x);
    return gamma_cf(a, x);
}

double beta_inc(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta_inc: requires a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double lbt = log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(x) +
                       b * std::log1p(-x);
    const double bt = std::exp(lbt);
    if (x < (a + 1.0) / (a + b + 2.0)) return bt * beta_cf(a, b, x) / a;
    return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double gaussian_ball_mass(double r, int n) {
    if (r < 0.0) throw DomainError("gaussian_ball_mass: r must be >= 0");
    if (n < 1) throw DomainError("gaussian_ball_mass: n must be >= 1");
    if (r == 0.0) return 0.0;
    if (n == 1) return std::erf(r);
    if (n == 2) return -std::expm1(-r * r);
    return gamma_p(0.5 * n, r * r);
}

double gaussian_ball_tail(double r, int n) {
    if (r < 0.0) throw DomainError("gaussian_ball_tail: r must be >= 0");
    if (n < 1) throw DomainError("gaussian_ball_tail: n must be >= 1");
    if (n == 1) return std::erfc(r);
    if (n == 2) return std::exp(-r * r);
    return gamma_q(0.5 * n, r * r);
}

double gaussian_mass_I(double gamma, int n) { return gaussian_ball_mass(0.5 * gamma, n); }

double beta_time_convolution(double t, double a, double b) {
    if (!(t > 0.0) || !(a > 0.0) || !(b > 0.0)) {
        throw DomainError("beta_time_convolution: t, a, b must be > 0");
    }
    return std::exp((a + b - 1.0) * std::log(t) - log_gamma(a + b));
}

double beta_time_convolution_quadrature(double t, double a, double b) {
    if (!(t > 0.0) || !(a > 0.0) || !(b > 0.0)) {
        throw DomainError("beta_time_convolution_quadrature: t, a, b must be > 0");
    }
    const double lnorm = log_gamma(a) + log_gamma(b);
    // Integrate on [0, 1] and rescale, so the node distances stay O(1).
    auto f = [&](double, double s, double one_minus_s) {
        return std::exp((a - 1.0) * std::log(one_minus_s) + (b - 1.0) * std::log(s) - lnorm);
    };
    const auto r = quad::tanh_sinh(f, 0.0, 1.0, {.rel_tol = 1e-13, .abs_tol = 0.0, .max_level = 12});
    if (!r.converged) throw QuadratureFailure("beta_time_convolution_quadrature did not converge");
    return r.value * std::pow(t, a + b - 1.0);
}

double unit_ball_volume(int n) {
    if (n < 1) throw DomainError("unit_ball_volume: n must be >= 1");
    return std::exp(0.5 * n * std::log(std::numbers::pi) - log_gamma(0.5 * n + 1.0));
}

}  // namespace fracheat

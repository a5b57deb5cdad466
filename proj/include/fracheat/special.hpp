#pragma once

namespace fracheat {

/// ln Gamma(x) for x > 0.
[[nodiscard]] double log_gamma(double x);
[[nodiscard]] double gamma_fn(double x);

/// Regularized lower and upper incomplete Gamma functions P(a, x), Q(a, x).
/// Series below x < a + 1, Lentz continued fraction above.
[[nodiscard]] double gamma_p(double a, double x);
[[nodiscard]] double gamma_q(double a, double x);

/// Regularized incomplete Beta I_x(a, b).
[[nodiscard]] double beta_inc(double a, double b, double x);

/// pi^{-n/2} * integral over |z| < r of exp(-|z|^2) dz = P(n/2, r^2).
[[nodiscard]] double gaussian_ball_mass(double r, int n);
/// 1 - gaussian_ball_mass(r, n), accurate for large r.
[[nodiscard]] double gaussian_ball_tail(double r, int n);

/// I(gamma) := gaussian_ball_mass(gamma / 2, n).
[[nodiscard]] double gaussian_mass_I(double gamma, int n);

/// Closed form of int_0^t (t-s)^{a-1} s^{b-1} / (Gamma(a) Gamma(b)) ds
///   = t^{a+b-1} / Gamma(a+b).
[[nodiscard]] double beta_time_convolution(double t, double a, double b);

/// The same convolution integral evaluated by endpoint-singular quadrature.
/// Used to cross-check the closed form.
[[nodiscard]] double beta_time_convolution_quadrature(double t, double a, double b);

/// Volume of the unit ball in R^n.
[[nodiscard]] double unit_ball_volume(int n);

}  // namespace fracheat

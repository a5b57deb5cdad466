#pragma once

namespace fracheat {

/// Fractional heat kernel
///   Phi_alpha(x, t) = t^{alpha-1}/Gamma(alpha) (4 pi t)^{-n/2} exp(-|x|^2 / (4t)),  t > 0,
/// and zero for t <= 0. Radial, so only |x|^2 is needed.
[[nodiscard]] double phi(double x_norm_sq, double t, double alpha, int n);

/// ln Phi_alpha; -infinity where the kernel vanishes.
[[nodiscard]] double phi_log(double x_norm_sq, double t, double alpha, int n);

/// Integral of Phi_alpha(., t) over R^n: t^{alpha-1}/Gamma(alpha) for t > 0.
[[nodiscard]] double spatial_mass(double t, double alpha);

/// Integral of Phi_alpha over R^n x (a, b): (b^alpha - a^alpha) / Gamma(alpha + 1).
[[nodiscard]] double spacetime_mass(double a, double b, double alpha);

/// Mass of the heat kernel Phi_1(x - ., elapsed) inside the ball |xi| < radius,
/// for a point x at distance offset_norm from the ball centre. Lies in [0, 1].
[[nodiscard]] double truncated_spatial_mass(double offset_norm, double radius, double elapsed,
                                            int n);

/// 1 - truncated_spatial_mass, with relative accuracy when the ball holds almost all the mass.
[[nodiscard]] double exterior_spatial_mass(double offset_norm, double radius, double elapsed,
                                           int n);

}  // namespace fracheat

#include "fracheat/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <type_traits>

#include "fracheat/errors.hpp"
#include "fracheat/kernel.hpp"
#include "fracheat/quadrature.hpp"
#include "fracheat/special.hpp"

namespace fracheat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A quadrature node on [a, b] together with its exact distances to both ends.
struct Loc {
    double tau;
    double from_a;
    double to_b;
    double a;
    double b;
};

// tau - o, computed from whichever endpoint is nearer to o.
double offset_from(const Loc& p, double o) {
    if (o == p.a) return p.from_a;
    if (o == p.b) return -p.to_b;
    if (std::abs(p.a - o) <= std::abs(p.b - o)) return (p.a - o) + p.from_a;
    return (p.b - o) - p.to_b;
}

double power_of(double coef, double u, double exponent) {
    if (u > 0.0) return coef * std::exp(exponent * std::log(u));
    if (u == 0.0 && exponent == 0.0) return coef;
    return 0.0;
}

double piece_at(const PowerPiece& pc, const Loc& p) {
    const double off = offset_from(p, pc.origin);
    return power_of(pc.coef, pc.reflected ? -off : off, pc.exponent);
}

bool piece_covers(const PowerPiece& pc, double t) { return t >= pc.lo && t < pc.hi; }

int level_for(const QuadratureConfig& cfg) {
    const double per_level = std::max(1.0, cfg.time_nodes / 26.0);
    return std::clamp(static_cast<int>(std::floor(std::log2(per_level))), 3, 14);
}

constexpr double kSubstitutionPower = -0.5;
constexpr double kMaxStretch = 20.0;

// int_a^b (t - tau)^{alpha-1}/Gamma(alpha) g(tau) dtau with b <= t. left_power
// and right_power are the exponents of g at the ends; strongly singular ends
// are stretched by tau - a = L v^m (or b - tau = L v^m) so the integrand in v
// stays bounded.
template <class G>
double time_integral(double a, double b, double t, double alpha, const QuadratureConfig& cfg,
                     G&& g, double left_power = 0.0, double right_power = 0.0) {
    if (!(b > a)) return 0.0;
    const double lg = log_gamma(alpha);
    const double gap = t - b;
    if (gap == 0.0) right_power += alpha - 1.0;
    if (left_power <= -1.0 || right_power <= -1.0) return kInf;
    // log_w folds the kernel and any Jacobian into g's own log-space product
    // when g supports it.
    auto integrand = [&](double tau, double from_a, double to_b, double log_jac = 0.0) {
        const Loc p{tau, from_a, to_b, a, b};
        const double log_w = (alpha - 1.0) * std::log(gap + to_b) - lg + log_jac;
        if constexpr (std::is_invocable_v<G&, const Loc&, double, double>) {
            return g(p, gap + to_b, log_w);
        } else {
            const double v = g(p, gap + to_b);
            if (v == 0.0) return 0.0;
            return v * std::exp(log_w);
        }
    };
    const quad::TanhSinhOptions opts{.rel_tol = cfg.target_rel_tol, .abs_tol = 0.0,
                                     .max_level = level_for(cfg)};
    const bool stretch_left = left_power < kSubstitutionPower;
    const bool stretch_right = right_power < kSubstitutionPower;
    const double w = b - a;
    const double lo = stretch_left ? a + 0.5 * w * (stretch_right ? 0.5 : 1.0) : a;
    const double hi = stretch_right ? b - 0.5 * w * (stretch_left ? 0.5 : 1.0) : b;

    auto stretched = [&](double L, double power, bool at_left) {
        const double m = std::min(1.0 / (1.0 + power), kMaxStretch);
        return quad::tanh_sinh(
            [&](double, double v, double one_m_v) {
                const double vv = v <= 0.5 ? v : 1.0 - one_m_v;
                const double d = L * std::pow(vv, m);
                if (!(d >= 1e-300)) return 0.0;
                const double log_jac = std::log(L * m) + (m - 1.0) * std::log(vv);
                return at_left ? integrand(a + d, d, w - d, log_jac) : integrand(b - d, w - d, d, log_jac);
            },
            0.0, 1.0, opts);
    };

    double value = 0.0, error = 0.0;
    bool converged = true;
    auto add = [&](const quad::Result& r) {
        value += r.value;
        error += r.error;
        converged = converged && r.converged;
    };
    if (stretch_left) add(stretched(lo - a, left_power, true));
    if (hi > lo) {
        add(quad::tanh_sinh(
            [&](double tau, double da, double db) {
                // Distances to the original ends, exact when the segment is not split.
                return integrand(tau, lo == a ? da : tau - a, hi == b ? db : b - tau);
            },
            lo, hi, opts));
    }
    if (stretch_right) add(stretched(b - hi, right_power, false));
    if (!std::isfinite(value)) throw QuadratureFailure("time integral is not finite");
    if (!converged && error > std::sqrt(cfg.target_rel_tol) * std::abs(value)) {
        throw QuadratureFailure("time integral did not converge on [" + std::to_string(a) + ", " +
                                std::to_string(b) + "]");
    }
    return value;
}

// I_{h'/t'}(e+1, alpha) - I_{l'/t'}(e+1, alpha), switching to the reflected
// form when the upper argument is close to 1.
double beta_difference(double e1, double alpha, double tp, double lp, double hp, double t_minus_l,
                       double t_minus_h) {
    if (hp / tp <= 0.5) return beta_inc(e1, alpha, hp / tp) - beta_inc(e1, alpha, lp / tp);
    return beta_inc(alpha, e1, t_minus_l / tp) - beta_inc(alpha, e1, t_minus_h / tp);
}

// Exact J_alpha of c (tau - o)^e restricted to [l, h], h <= t, l >= o, e > -1.
double exact_forward_piece(const PowerPiece& pc, double l, double h, double t, double alpha) {
    const double tp = t - pc.origin;
    const double lp = l - pc.origin;
    const double hp = h - pc.origin;
    const double e = pc.exponent;
    const double scale = std::exp((alpha + e) * std::log(tp) + log_gamma(e + 1.0) -
                                  log_gamma(e + 1.0 + alpha));
    return pc.coef * scale * beta_difference(e + 1.0, alpha, tp, lp, hp, t - l, t - h);
}

void collect_breakpoints(const TimeProfile& prof, std::vector<double>& out) {
    const auto bp = prof.breakpoints();
    out.insert(out.end(), bp.begin(), bp.end());
}

std::vector<double> sorted_cuts(std::vector<double> cuts, double lo, double hi) {
    cuts.push_back(lo);
    cuts.push_back(hi);
    std::vector<double> out;
    for (double c : cuts) {
        if (std::isfinite(c) && c >= lo && c <= hi) out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double profile_at(const TimeProfile& prof, const Loc& p, double mid) {
    double s = 0.0;
    for (const auto& pc : prof.pieces) {
        if (piece_covers(pc, mid)) s += piece_at(pc, p);
    }
    if (s != 0.0 && prof.cutoff) s *= (*prof.cutoff)(p.tau);
    return s;
}

// profile(tau) * exp(lf), with each power formed in log space so
// that a singular piece near its origin cannot overflow before the product.
double profile_scaled(const TimeProfile& prof, const Loc& p, double mid, double lf) {
    double s = 0.0;
    for (const auto& pc : prof.pieces) {
        if (!piece_covers(pc, mid) || pc.coef == 0.0) continue;
        const double off = offset_from(p, pc.origin);
        const double u = pc.reflected ? -off : off;
        if (u > 0.0) {
            s += std::copysign(std::exp(std::log(std::abs(pc.coef)) + pc.exponent * std::log(u) + lf), pc.coef);
        } else if (u == 0.0 && pc.exponent == 0.0) {
            s += pc.coef * std::exp(lf);
        }
    }
    if (s != 0.0 && prof.cutoff) s *= (*prof.cutoff)(p.tau);
    return s;
}

// Smallest exponent among the pieces active at mid that are singular at o
// from the given side, or 0.
double edge_exponent(const TimeProfile& prof, double mid, double o, bool reflected) {
    double e = 0.0;
    for (const auto& pc : prof.pieces) {
        if (piece_covers(pc, mid) && pc.coef != 0.0 && pc.origin == o && pc.reflected == reflected) {
            e = std::min(e, pc.exponent);
        }
    }
    return e;
}

bool any_active(const TimeProfile& prof, double mid) {
    if (prof.cutoff && mid >= prof.cutoff->start + prof.cutoff->width) return false;
    return std::any_of(prof.pieces.begin(), prof.pieces.end(),
                       [&](const PowerPiece& pc) { return piece_covers(pc, mid); });
}

constexpr double kSpectralReach = 0.25;

// Heat average pi^{-n/2} int exp(-|z|^2) h(|x + sqrt(4 s) z|) dz for h = phi(eps .)^k.
// h has branch points at imaginary distance 1/(eps sqrt(4 s)) in z, so the
// composite rule keeps panel half-widths below that distance.
double expphi_average(const ExpPhi& e, double x_norm, double s, int n,
                      const QuadratureConfig& cfg) {
    auto h = [&](double r2) {
        return std::exp(-e.power * (std::sqrt(1.0 + e.eps * e.eps * r2) - 1.0));
    };
    const double c = std::sqrt(4.0 * s);
    const double W = cfg.spatial_truncation;
    const double reach = e.eps * c;
    const int order = std::max(8, cfg.spatial_nodes / 2);
    const auto& gl = quad::gauss_legendre(order);
    auto composite = [&](double lo, double hi, int panels, auto&& f) {
        double sum = 0.0;
        const double w = (hi - lo) / panels;
        for (int k = 0; k < panels; ++k) {
            const double mid = lo + (k + 0.5) * w;
            for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
                sum += gl.weights[i] * f(mid + 0.5 * w * gl.nodes[i]);
            }
        }
        return sum * 0.5 * w;
    };
    const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
    if (reach <= kSpectralReach) {
        // h is analytic in a wide strip on the Gaussian scale: Gauss-Hermite along
        // x and generalized Gauss-Laguerre in the squared perpendicular radius.
        const bool narrow = reach <= 0.1 * kSpectralReach;
        const auto& gh = quad::gauss_hermite(narrow ? 24 : 48);
        auto along = [&](double perp) {
            double sum = 0.0;
            for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
                const double y = x_norm + c * gh.nodes[i];
                sum += gh.weights[i] * h(y * y + perp);
            }
            return inv_sqrt_pi * sum;
        };
        if (n == 1) return along(0.0);
        const double a = 0.5 * (n - 3);
        const auto& lag = quad::gauss_laguerre(narrow ? 16 : 32, a);
        double sum = 0.0;
        for (std::size_t j = 0; j < lag.nodes.size(); ++j) sum += lag.weights[j] * along(c * c * lag.nodes[j]);
        return sum / gamma_fn(a + 1.0);
    }
    const int zp = std::clamp(static_cast<int>(std::ceil(W * reach)) + 1, 4, 256);
    if (n == 1) {
        return inv_sqrt_pi * composite(-W, W, zp, [&](double z) {
                   const double y = x_norm + c * z;
                   return std::exp(-z * z) * h(y * y);
               });
    }
    // Perpendicular radius rho with density 2 rho^{n-2} e^{-rho^2} / Gamma((n-1)/2).
    const double rho_max = W;
    const int rp = std::clamp(static_cast<int>(std::ceil(0.5 * rho_max * reach)) + 1, 3, 128);
    const double norm = 2.0 / gamma_fn(0.5 * (n - 1));
    return inv_sqrt_pi * norm * composite(0.0, rho_max, rp, [&](double rho) {
               const double perp = c * c * rho * rho;
               const double wr = std::pow(rho, n - 2) * std::exp(-rho * rho);
               if (wr == 0.0) return 0.0;
               return wr * composite(-W, W, zp, [&](double z) {
                          const double y = x_norm + c * z;
                          return std::exp(-z * z) * h(y * y + perp);
                      });
           });
}

double j_separable(const SeparableTerm& term, double x, double t, double alpha, int n,
                   const QuadratureConfig& cfg) {
    if (std::holds_alternative<Constant1>(term.spatial)) {
        return rl_integral(term.temporal, t, alpha, cfg);
    }
    std::vector<double> cuts;
    collect_breakpoints(term.temporal, cuts);
    if (const auto* pb = std::get_if<Paraboloid>(&term.spatial)) {
        cuts.push_back(pb->origin);
        cuts.push_back(pb->reflected ? pb->origin - x * x : pb->origin + x * x);
    }
    if (!cfg.singularity_split) cuts.clear();
    const auto grid = sorted_cuts(std::move(cuts), 0.0, t);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double a = grid[i];
        const double b = grid[i + 1];
        const double mid = 0.5 * (a + b);
        if (!any_active(term.temporal, mid)) continue;
        if (const auto* pb = std::get_if<Paraboloid>(&term.spatial)) {
            const double r2 = pb->reflected ? pb->origin - mid : mid - pb->origin;
            if (!(r2 > 0.0)) continue;
            auto integrand = [&](const Loc& p, double s, double log_w) {
                const double off = offset_from(p, pb->origin);
                const double rr = pb->reflected ? -off : off;
                if (!(rr > 0.0)) return 0.0;
                const double mass = truncated_spatial_mass(x, std::sqrt(rr), s, n);
                if (mass == 0.0) return 0.0;
                return profile_scaled(term.temporal, p, mid, std::log(mass) + log_w);
            };
            // The ball mass scales like radius^n near the paraboloid tip, except
            // at x = 0 when the tip is the evaluation time.
            const double half_n = 0.5 * n;
            double lp = 0.0, rp = 0.0;
            if (!pb->reflected && a == pb->origin) {
                lp = edge_exponent(term.temporal, mid, a, false) + half_n;
            }
            if (pb->reflected && b == pb->origin) {
                const double e = edge_exponent(term.temporal, mid, b, true);
                if (b < t) rp = e + half_n;
                else if (x == 0.0) rp = e;
            }
            total += time_integral(a, b, t, alpha, cfg, integrand, std::min(lp, 0.0), std::min(rp, 0.0));
        } else {
            const auto& e = std::get<ExpPhi>(term.spatial);
            total += time_integral(a, b, t, alpha, cfg, [&](const Loc& p, double s) {
                const double tv = profile_at(term.temporal, p, mid);
                if (tv == 0.0) return 0.0;
                return tv * expphi_average(e, x, s, n, cfg);
            });
        }
    }
    return total;
}

// Mass of the heat kernel from x over shell k after time s.
double shell_mass(const GridFunction& g, std::size_t k, double x, double s, int n) {
    const double inner = g.shell_edges[k];
    const bool last = k + 1 == g.shells();
    if (x < inner) {
        // Both balls hold almost everything: difference the exterior masses.
        const double outer = last ? 0.0 : exterior_spatial_mass(x, g.shell_edges[k + 1], s, n);
        return std::max(0.0, exterior_spatial_mass(x, inner, s, n) - outer);
    }
    const double lower = inner > 0.0 ? truncated_spatial_mass(x, inner, s, n) : 0.0;
    if (last) return std::max(0.0, 1.0 - lower);
    return std::max(0.0, truncated_spatial_mass(x, g.shell_edges[k + 1], s, n) - lower);
}

// Time dependence of one shell on [times[i], times[i+1]]: c tau^p or v0 + slope (tau - t0).
struct Segment {
    bool power = false;
    double c = 0.0;
    double p = 0.0;
    double t0 = 0.0;
    double v0 = 0.0;
    double slope = 0.0;

    [[nodiscard]] double at(double tau) const {
        return power ? c * std::exp(p * std::log(tau)) : v0 + slope * (tau - t0);
    }
};

Segment segment_of(const GridFunction& g, std::size_t i, std::size_t k) {
    Segment sg;
    const double t0 = g.times[i], t1 = g.times[i + 1];
    const double v0 = g.value(i, k), v1 = g.value(i + 1, k);
    sg.t0 = t0;
    sg.v0 = v0;
    sg.slope = (v1 - v0) / (t1 - t0);
    if (!g.power_law) return sg;
    double ta = t0, tb = t1, va = v0, vb = v1;
    if (t0 == 0.0) {
        if (i + 2 >= g.times.size()) return sg;
        ta = t1;
        tb = g.times[i + 2];
        va = v1;
        vb = g.value(i + 2, k);
    }
    if (!(va > 0.0) || !(vb > 0.0)) return sg;
    const double p = std::log(vb / va) / std::log(tb / ta);
    if (t0 == 0.0 && !(p > -1.0)) return sg;
    sg.power = true;
    sg.p = p;
    sg.c = va * std::exp(-p * std::log(ta));
    return sg;
}

double j_grid(const GridFunction& g, double x, double t, double alpha, int n,
              const QuadratureConfig& cfg) {
    const std::size_t K = g.shells();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < g.times.size(); ++i) {
        const double t0 = g.times[i];
        const double t1 = g.times[i + 1];
        const double a = t0;
        const double b = std::min(t1, t);
        if (!(b > a)) break;
        for (std::size_t k = 0; k < K; ++k) {
            const double v0 = g.value(i, k);
            const double v1 = g.value(i + 1, k);
            if (v0 == 0.0 && v1 == 0.0) continue;
            const Segment sg = segment_of(g, i, k);
            if (sg.power) {
                if (K == 1 && sg.p > -1.0) {
                    total += exact_forward_piece(PowerPiece{a, b, sg.c, sg.p, 0.0, false}, a, b, t, alpha);
                    continue;
                }
                total += time_integral(a, b, t, alpha, cfg, [&](const Loc& p, double s) {
                    return sg.at(p.tau) * shell_mass(g, k, x, s, n);
                });
                continue;
            }
            const double slope = sg.slope;
            if (K == 1) {
                // Linear data l(tau) = c0 + c1 (t - tau); integrate in u = t - tau.
                const double c0 = v0 + slope * (t - t0);
                const double c1 = -slope;
                const double U = t - a;
                const double L = t - b;
                const double m0 = (std::pow(U, alpha) - std::pow(L, alpha)) / gamma_fn(alpha + 1.0);
                const double m1 = (std::pow(U, alpha + 1.0) - std::pow(L, alpha + 1.0)) /
                                  (gamma_fn(alpha) * (alpha + 1.0));
                total += c0 * m0 + c1 * m1;
                continue;
            }
            total += time_integral(a, b, t, alpha, cfg, [&](const Loc& p, double s) {
                const double lin = v0 + slope * ((a - t0) + p.from_a);
                if (lin == 0.0) return 0.0;
                return lin * shell_mass(g, k, x, s, n);
            });
        }
    }
    return total;
}

// Fold amplitude and time scale into the component parameters.
SeparableTerm rescaled(const SeparableTerm& term, double amp, double T) {
    SeparableTerm out = term;
    for (auto& pc : out.temporal.pieces) {
        pc.lo *= T;
        pc.hi *= T;
        pc.origin *= T;
        pc.coef *= amp * std::pow(T, -pc.exponent);
    }
    if (out.temporal.cutoff) {
        out.temporal.cutoff->start *= T;
        out.temporal.cutoff->width *= T;
    }
    if (auto* e = std::get_if<ExpPhi>(&out.spatial)) e->eps /= std::sqrt(T);
    if (auto* pb = std::get_if<Paraboloid>(&out.spatial)) pb->origin *= T;
    return out;
}

GridFunction rescaled(const GridFunction& g, double amp, double T) {
    GridFunction out = g;
    for (auto& t : out.times) t *= T;
    for (auto& e : out.shell_edges) e *= std::sqrt(T);
    for (auto& v : out.values) v *= amp;
    return out;
}

SpaceTimeFunction normalized(const SpaceTimeFunction& f) {
    SpaceTimeFunction out;
    if (f.amplitude == 0.0) return out;
    for (const auto& c : f.components) {
        std::visit([&](const auto& comp) { out.components.push_back(rescaled(comp, f.amplitude, f.time_scale)); },
                   c);
    }
    return out;
}

// Compass search for the minimum of f over a box, started at (x0, y0).
template <class F>
double box_minimum(F&& f, double xlo, double xhi, double ylo, double yhi, int grid) {
    double best = kInf, bx = xlo, by = ylo;
    for (int i = 0; i <= grid; ++i) {
        for (int j = 0; j <= grid; ++j) {
            const double x = xlo + (xhi - xlo) * i / grid;
            const double y = ylo + (yhi - ylo) * j / grid;
            const double v = f(x, y);
            if (v < best) {
                best = v;
                bx = x;
                by = y;
            }
        }
    }
    double hx = (xhi - xlo) / grid;
    double hy = (yhi - ylo) / grid;
    while (hx > 1e-12 * (xhi - xlo) || hy > 1e-12 * (yhi - ylo)) {
        bool moved = false;
        const double dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
        for (const auto& d : dirs) {
            const double x = std::clamp(bx + d[0] * hx, xlo, xhi);
            const double y = std::clamp(by + d[1] * hy, ylo, yhi);
            const double v = f(x, y);
            if (v < best) {
                best = v;
                bx = x;
                by = y;
                moved = true;
            }
        }
        if (!moved) {
            hx *= 0.5;
            hy *= 0.5;
        }
    }
    return best;
}

double cached_constant(std::map<int, double>& cache, std::mutex& m, int n, double (*compute)(int)) {
    if (n < 1) throw DomainError("dimension must be >= 1");
    {
        std::lock_guard lock(m);
        if (auto it = cache.find(n); it != cache.end()) return it->second;
    }
    const double v = compute(n);
    std::lock_guard lock(m);
    cache.emplace(n, v);
    return v;
}

double compute_paraboloid_c(int n) {
    // Scale to t = 1: |x| = d < 1, source time s in [1/4, 3/4].
    return box_minimum(
        [n](double d, double s) { return truncated_spatial_mass(d, std::sqrt(s), 1.0 - s, n); },
        0.0, 1.0, 0.25, 0.75, 40);
}

double compute_reversed_c(int n) {
    // Scale to T - s = 1: elapsed e in (0, 1], |x| = theta sqrt(1 - e).
    return box_minimum(
        [n](double e, double theta) {
            return truncated_spatial_mass(theta * std::sqrt(1.0 - e), 1.0, e, n);
        },
        1e-9, 1.0, 0.0, 1.0, 40);
}

}  // namespace

double SmoothCutoff::operator()(double t) const {
    if (t <= start) return 1.0;
    if (t >= start + width) return 0.0;
    const double x = (t - start) / width;
    const double arg = 1.0 / (1.0 - x) - 1.0 / x;
    if (arg > 700.0) return 0.0;
    return 1.0 / (1.0 + std::exp(arg));
}

double TimeProfile::operator()(double t) const {
    double s = 0.0;
    for (const auto& pc : pieces) {
        if (!piece_covers(pc, t)) continue;
        s += power_of(pc.coef, pc.reflected ? pc.origin - t : t - pc.origin, pc.exponent);
    }
    if (s != 0.0 && cutoff) s *= (*cutoff)(t);
    return s;
}

std::vector<double> TimeProfile::breakpoints() const {
    std::vector<double> out;
    for (const auto& pc : pieces) {
        out.push_back(pc.lo);
        if (std::isfinite(pc.hi)) out.push_back(pc.hi);
        out.push_back(pc.origin);
    }
    if (cutoff) {
        out.push_back(cutoff->start);
        out.push_back(cutoff->start + cutoff->width);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

TimeProfile TimeProfile::power(double coef, double exponent) {
    return TimeProfile{{PowerPiece{0.0, kInf, coef, exponent, 0.0, false}}, std::nullopt};
}

TimeProfile TimeProfile::indicator(double a, double b, double c) {
    return TimeProfile{{PowerPiece{a, b, c, 0.0, a, false}}, std::nullopt};
}

double radial_value(const RadialProfile& profile, double x_norm, double t) {
    if (std::holds_alternative<Constant1>(profile)) return 1.0;
    if (const auto* e = std::get_if<ExpPhi>(&profile)) {
        const double ex = e->eps * x_norm;
        return std::exp(-e->power * (std::sqrt(1.0 + ex * ex) - 1.0));
    }
    const auto& pb = std::get<Paraboloid>(profile);
    const double r2 = pb.reflected ? pb.origin - t : t - pb.origin;
    return x_norm * x_norm < r2 ? 1.0 : 0.0;
}

std::size_t GridFunction::shell_of(double x_norm) const {
    const auto it = std::upper_bound(shell_edges.begin(), shell_edges.end(), x_norm);
    return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - shell_edges.begin()) - 1));
}

double GridFunction::at(double x_norm, double t) const {
    if (times.empty() || t < times.front() || t > times.back()) return 0.0;
    const std::size_t k = shell_of(x_norm);
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.end()) return value(times.size() - 1, k);
    const std::size_t i1 = static_cast<std::size_t>(it - times.begin());
    const std::size_t i0 = i1 - 1;
    if (power_law && t > 0.0) {
        const Segment sg = segment_of(*this, i0, k);
        if (sg.power) return sg.at(t);
    }
    const double w = (t - times[i0]) / (times[i1] - times[i0]);
    return (1.0 - w) * value(i0, k) + w * value(i1, k);
}

void GridFunction::validate() const {
    if (times.size() < 2) throw DomainError("GridFunction: need at least two time nodes");
    if (shell_edges.empty() || shell_edges.front() != 0.0) {
        throw DomainError("GridFunction: shell_edges must start at 0");
    }
    if (!std::is_sorted(times.begin(), times.end()) ||
        std::adjacent_find(times.begin(), times.end()) != times.end() || times.front() < 0.0) {
        throw DomainError("GridFunction: times must be nonnegative and strictly increasing");
    }
    if (std::adjacent_find(shell_edges.begin(), shell_edges.end(), std::greater_equal<>()) !=
        shell_edges.end()) {
        throw DomainError("GridFunction: shell_edges must be strictly increasing");
    }
    if (values.size() != times.size() * shell_edges.size()) {
        throw DomainError("GridFunction: values size mismatch");
    }
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("GridFunction: values must be finite and >= 0");
    }
}

double SpaceTimeFunction::operator()(double x_norm, double t) const {
    if (is_zero()) return 0.0;
    const double xs = x_norm / std::sqrt(time_scale);
    const double ts = t / time_scale;
    double s = 0.0;
    for (const auto& c : components) {
        if (const auto* term = std::get_if<SeparableTerm>(&c)) {
            const double tv = term->temporal(ts);
            if (tv != 0.0) s += tv * radial_value(term->spatial, xs, ts);
        } else {
            s += std::get<GridFunction>(c).at(xs, ts);
        }
    }
    return amplitude * s;
}

SpaceTimeFunction SpaceTimeFunction::separable(RadialProfile spatial, TimeProfile temporal) {
    SpaceTimeFunction f;
    f.components.emplace_back(SeparableTerm{std::move(spatial), std::move(temporal)});
    return f;
}

SpaceTimeFunction SpaceTimeFunction::grid(GridFunction g) {
    g.validate();
    SpaceTimeFunction f;
    f.components.emplace_back(std::move(g));
    return f;
}

SpaceTimeFunction SpaceTimeFunction::plus(const SpaceTimeFunction& other) const {
    if (amplitude == other.amplitude && time_scale == other.time_scale) {
        SpaceTimeFunction out = *this;
        out.components.insert(out.components.end(), other.components.begin(), other.components.end());
        return out;
    }
    SpaceTimeFunction out = normalized(*this);
    const SpaceTimeFunction rhs = normalized(other);
    out.components.insert(out.components.end(), rhs.components.begin(), rhs.components.end());
    return out;
}

void QuadratureConfig::validate() const {
    if (time_nodes < 2) throw DomainError("QuadratureConfig: time_nodes must be >= 2");
    if (spatial_nodes < 2) throw DomainError("QuadratureConfig: spatial_nodes must be >= 2");
    if (!(spatial_truncation > 0.0)) throw DomainError("QuadratureConfig: spatial_truncation must be > 0");
    if (!(target_rel_tol > 0.0)) throw DomainError("QuadratureConfig: target_rel_tol must be > 0");
}

double rl_power(double gamma, double t, double alpha) {
    if (!(alpha > 0.0)) throw DomainError("rl_power: alpha must be > 0");
    if (!(gamma > -1.0)) throw DomainError("rl_power: gamma must be > -1");
    if (!(t > 0.0)) return 0.0;
    return std::exp(log_gamma(gamma + 1.0) - log_gamma(alpha + gamma + 1.0) +
                    (alpha + gamma) * std::log(t));
}

double rl_integral(const TimeProfile& profile, double t, double alpha, const QuadratureConfig& cfg) {
    if (!(alpha > 0.0)) throw DomainError("rl_integral: alpha must be > 0");
    if (!(t > 0.0)) return 0.0;
    const double cut_lo = profile.cutoff ? profile.cutoff->start : kInf;
    const double cut_hi = profile.cutoff ? profile.cutoff->start + profile.cutoff->width : kInf;
    double total = 0.0;
    for (const auto& pc : profile.pieces) {
        const double l = std::max(pc.lo, 0.0);
        const double h = std::min({pc.hi, t, cut_hi});
        if (!(h > l)) continue;
        auto numeric = [&](double a, double b, bool with_cutoff) {
            const double mid = 0.5 * (a + b);
            return time_integral(a, b, t, alpha, cfg, [&](const Loc& p, double) {
                if (!piece_covers(pc, mid)) return 0.0;
                const double v = piece_at(pc, p);
                return with_cutoff ? v * (*profile.cutoff)(p.tau) : v;
            });
        };
        // Part below the cutoff band: exact where possible.
        const double h_plain = std::min(h, cut_lo);
        if (h_plain > l) {
            const bool exact = !pc.reflected && pc.origin <= l && pc.exponent > -1.0;
            total += exact ? exact_forward_piece(pc, l, h_plain, t, alpha) : numeric(l, h_plain, false);
        }
        const double band_lo = std::max(l, cut_lo);
        if (h > band_lo) total += numeric(band_lo, h, true);
    }
    return total;
}

double j_alpha(const SpaceTimeFunction& f, double x_norm, double t, double alpha, int n,
               const QuadratureConfig& cfg) {
    if (!(alpha > 0.0)) throw DomainError("j_alpha: alpha must be > 0");
    if (n < 1) throw DomainError("j_alpha: n must be >= 1");
    if (!(f.time_scale > 0.0)) throw DomainError("j_alpha: time_scale must be > 0");
    if (!(t > 0.0) || f.is_zero()) return 0.0;
    const double T = f.time_scale;
    const double xs = std::abs(x_norm) / std::sqrt(T);
    const double ts = t / T;
    double total = 0.0;
    for (const auto& c : f.components) {
        if (const auto* term = std::get_if<SeparableTerm>(&c)) {
            total += j_separable(*term, xs, ts, alpha, n, cfg);
        } else {
            total += j_grid(std::get<GridFunction>(c), xs, ts, alpha, n, cfg);
        }
    }
    return f.amplitude * std::pow(T, alpha) * total;
}

double paraboloid_c_n(int n) {
    static std::map<int, double> cache;
    static std::mutex m;
    return cached_constant(cache, m, n, compute_paraboloid_c);
}

double reversed_paraboloid_c_n(int n) {
    static std::map<int, double> cache;
    static std::mutex m;
    return cached_constant(cache, m, n, compute_reversed_c);
}

double j_alpha_lower_paraboloid(double t, double alpha, double time_exponent, int n) {
    if (!(alpha > 0.0)) throw DomainError("j_alpha_lower_paraboloid: alpha must be > 0");
    if (!(t > 0.0)) return 0.0;
    const double g = time_exponent;
    double unit;
    if (g > -1.0) {
        const PowerPiece pc{0.25, 0.75, 1.0, g, 0.0, false};
        unit = exact_forward_piece(pc, 0.25, 0.75, 1.0, alpha);
    } else {
        const double lg = log_gamma(alpha);
        unit = quad::gl_integrate(
            [&](double s) { return std::exp((alpha - 1.0) * std::log(1.0 - s) + g * std::log(s) - lg); },
            0.25, 0.75, 64);
    }
    return paraboloid_c_n(n) * std::pow(t, alpha + g) * unit;
}

SupBoundReport sup_bound_check(const SpaceTimeFunction& f, double a, double b, double alpha, int n,
                               double f_sup, const std::vector<double>& radii,
                               const std::vector<double>& times, const QuadratureConfig& cfg) {
    if (!(b > a)) throw DomainError("sup_bound_check: requires a < b");
    SupBoundReport rep;
    rep.bound = std::pow(b - a, alpha) / gamma_fn(alpha + 1.0) * f_sup;
    for (double t : times) {
        if (!(t > a) || t > b) continue;
        for (double r : radii) rep.max_j = std::max(rep.max_j, j_alpha(f, r, t, alpha, n, cfg));
    }
    rep.margin = rep.bound - rep.max_j;
    return rep;
}

}  // namespace fracheat

#include "fracheat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include "fracheat/errors.hpp"

namespace fracheat::quad {

namespace {

// Beyond this abscissa the distance to the endpoint underflows for any
// interval of practical length.
constexpr double kMaxAbscissa = 6.5;

struct Node {
    double x;       // position in (-1, 1)
    double one_m;   // 1 - |x| without cancellation
    double weight;  // dx/du
};

Node node_at(double u) {
    const double y = 0.5 * std::numbers::pi * std::sinh(u);
    const double ch = std::cosh(y);
    Node nd{};
    nd.x = std::tanh(y);
    nd.one_m = std::exp(-std::abs(y)) / ch;
    nd.weight = 0.5 * std::numbers::pi * std::cosh(u) / (ch * ch);
    return nd;
}

template <class Builder>
const Rule& cached_rule(std::map<int, Rule>& cache, std::mutex& m, int order, Builder build) {
    std::lock_guard lock(m);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build(order)).first;
    return it->second;
}

Rule build_legendre(int n) {
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            dp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        r.nodes[i] = -z;
        r.nodes[n - 1 - i] = z;
        r.weights[i] = r.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    return r;
}

Rule build_hermite(int n) {
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double pim4 = std::pow(std::numbers::pi, -0.25);
    double z = 0.0;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -0.16667);
        } else if (i == 1) {
            z -= 1.14 * std::pow(n, 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * r.nodes[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * r.nodes[1];
        } else {
            z = 2.0 * z - r.nodes[i - 2];
        }
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = pim4, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        r.nodes[i] = z;
        r.nodes[n - 1 - i] = -z;
        r.weights[i] = r.weights[n - 1 - i] = 2.0 / (pp * pp);
    }
    return r;
}

Rule build_laguerre(int n, double a) {
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double lg_ratio = std::lgamma(a + n) - std::lgamma(static_cast<double>(n));
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i == 0) {
            z = (1.0 + a) * (3.0 + 0.92 * a) / (1.0 + 2.4 * n + 1.8 * a);
        } else if (i == 1) {
            z += (15.0 + 6.25 * a) / (1.0 + 0.9 * a + 2.5 * n);
        } else {
            const double ai = i - 1;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai) + 1.26 * ai * a / (1.0 + 3.5 * ai)) * (z - r.nodes[i - 2]) /
                 (1.0 + 0.3 * a);
        }
        double p2 = 0.0, pp = 0.0;
        for (int it = 0; it < 200; ++it) {
            double p1 = 1.0;
            p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0 + a - z) * p2 - (j - 1.0 + a) * p3) / j;
            }
            pp = (n * p1 - (n + a) * p2) / z;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) <= 1e-15 * std::max(1.0, z)) break;
        }
        r.nodes[i] = z;
        r.weights[i] = -std::exp(lg_ratio) / (pp * n * p2);
    }
    return r;
}

}  // namespace

Result tanh_sinh(const EndpointIntegrand& f, double a, double b, TanhSinhOptions opts) {
    Result res;
    if (!(b > a)) return res;
    const double half = 0.5 * (b - a);

    auto eval_pair = [&](double u, double& sum) {
        const Node nd = node_at(u);
        const double dist = half * nd.one_m;
        const double w = nd.weight * half;
        if (!(dist >= std::numeric_limits<double>::min()) || w == 0.0) return;
        // Right node: distance to b is dist; left node: distance to a is dist.
        const double xr = b - dist;
        const double xl = a + dist;
        sum += w * f(xr, (b - a) - dist, dist);
        sum += w * f(xl, dist, (b - a) - dist);
        res.evaluations += 2;
    };

    double h = 0.5;
    double sum = f(0.5 * (a + b), half, half) * 0.5 * std::numbers::pi * half;
    res.evaluations = 1;
    for (int k = 1; k * h <= kMaxAbscissa; ++k) eval_pair(k * h, sum);
    double estimate = sum * h;

    for (int level = 1; level <= opts.max_level; ++level) {
        h *= 0.5;
        for (int k = 1; k * h <= kMaxAbscissa; k += 2) eval_pair(k * h, sum);
        const double next = sum * h;
        res.error = std::abs(next - estimate);
        estimate = next;
        if (!std::isfinite(estimate)) break;
        if (level >= 2 && res.error <= std::max(opts.abs_tol, opts.rel_tol * std::abs(estimate))) {
            res.converged = true;
            break;
        }
    }
    res.value = estimate;
    return res;
}

const Rule& gauss_legendre(int order) {
    static std::map<int, Rule> cache;
    static std::mutex m;
    if (order < 1) throw DomainError("gauss_legendre: order must be >= 1");
    return cached_rule(cache, m, order, build_legendre);
}

const Rule& gauss_laguerre(int order, double a) {
    static std::map<std::pair<int, double>, Rule> cache;
    static std::mutex m;
    if (order < 1) throw DomainError("gauss_laguerre: order must be >= 1");
    if (!(a > -1.0)) throw DomainError("gauss_laguerre: requires a > -1");
    std::lock_guard lock(m);
    const auto key = std::pair{order, a};
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_laguerre(order, a)).first;
    return it->second;
}

const Rule& gauss_hermite(int order) {
    static std::map<int, Rule> cache;
    static std::mutex m;
    if (order < 1) throw DomainError("gauss_hermite: order must be >= 1");
    return cached_rule(cache, m, order, build_hermite);
}

}  // namespace fracheat::quad

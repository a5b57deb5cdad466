#include "fracheat/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "fracheat/errors.hpp"
#include "fracheat/sharp_bounds.hpp"

namespace fracheat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Runs body(i) for i in [0, count) on a static interleaved partition. The
// first exception (by worker) is rethrown after all workers joined.
template <class Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
    const std::size_t workers = std::min<std::size_t>(std::max(1, threads), std::max<std::size_t>(count, 1));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> out;
    if (count == 1) return {hi};
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int k = 0; k < count; ++k) out.push_back(k + 1 == count ? hi : std::exp(llo + (lhi - llo) * k / (count - 1)));
    return out;
}

double ratio_of(double num, double den) {
    if (num == 0.0) return 0.0;
    if (den == 0.0) return kInf;
    return num / den;
}

bool spatially_constant(const SpaceTimeFunction& f) {
    return std::all_of(f.components.begin(), f.components.end(), [](const Component& c) {
        if (const auto* t = std::get_if<SeparableTerm>(&c)) return std::holds_alternative<Constant1>(t->spatial);
        return std::get<GridFunction>(c).shells() == 1;
    });
}

}  // namespace

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FRACHEAT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<int>(std::min<long>(v, 1024));
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void SampleConfig::validate() const {
    if (time_samples < 1 || radial_shells < 1) throw DomainError("sampling: counts must be >= 1");
    if (!(t_min_fraction > 0.0 && t_min_fraction <= 1.0)) throw DomainError("sampling: t_min_fraction in (0, 1]");
    if (!(radius_factor >= 0.0)) throw DomainError("sampling: radius_factor must be >= 0");
    if (horizon && !(*horizon > 0.0)) throw DomainError("sampling: horizon must be > 0");
    if (!(tol >= 0.0)) throw DomainError("sampling: tol must be >= 0");
}

std::vector<double> SampleConfig::times(double H) const { return log_spaced(t_min_fraction * H, H, time_samples); }

std::vector<double> SampleConfig::radii(double H) const {
    std::vector<double> out;
    const double R = radius_factor * std::sqrt(H);
    for (int k = 0; k < radial_shells; ++k) out.push_back(radial_shells == 1 ? 0.0 : R * k / (radial_shells - 1));
    return out;
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Certified: return "certified";
        case Verdict::Violated: return "violated";
        case Verdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

int exit_code(Verdict v) {
    switch (v) {
        case Verdict::Certified: return 0;
        case Verdict::Violated: return 1;
        case Verdict::Inconclusive: return 3;
    }
    return 3;
}

VerificationReport check_system(const SolutionPair& pair, const ProblemParams& params,
                                const SampleConfig& sampling, const QuadratureConfig& quadrature) {
    params.validate();
    sampling.validate();
    quadrature.validate();
    VerificationReport rep;
    rep.sampling = sampling;
    rep.quadrature = quadrature;
    const double H = sampling.horizon.value_or(pair.horizon);
    if (!(H > 0.0)) throw DomainError("check_system: horizon must be > 0");
    rep.horizon = H;
    const auto times = sampling.times(H);
    const auto radii = sampling.radii(H);
    const std::size_t nt = times.size(), nr = radii.size();
    std::vector<SampleRecord> recs(nt * nr);

    parallel_for(recs.size(), resolve_threads(sampling.threads), [&](std::size_t i) {
        SampleRecord& r = recs[i];
        r.t = times[i / nr];
        r.x = radii[i % nr];
        r.f = pair.f(r.x, r.t);
        r.g = pair.g(r.x, r.t);
        try {
            if (r.f != 0.0) r.j_beta_g = j_alpha(pair.g, r.x, r.t, params.beta, params.n, quadrature);
            if (r.g != 0.0) r.j_alpha_f = j_alpha(pair.f, r.x, r.t, params.alpha, params.n, quadrature);
        } catch (const QuadratureFailure&) {
            r.failed = true;
            return;
        }
        r.ratio_f = ratio_of(r.f, params.K1 * std::pow(r.j_beta_g, params.lambda));
        r.ratio_g = ratio_of(r.g, params.K2 * std::pow(r.j_alpha_f, params.sigma));
    });

    auto flag = [&](const char* which, double t, double x, double value) {
        if (!rep.violation) rep.violation = Violation{which, t, x, value};
    };
    for (const auto& r : recs) {
        ++rep.samples;
        if (r.f < 0.0 || r.g < 0.0 || !std::isfinite(r.f) || !std::isfinite(r.g)) {
            rep.nonnegative_ok = false;
            flag("sign", r.t, r.x, std::min(r.f, r.g));
        }
        if (r.failed) {
            ++rep.failed_samples;
            continue;
        }
        if (r.ratio_f > rep.max_ratio_f) {
            rep.max_ratio_f = r.ratio_f;
            rep.argmax_f_t = r.t;
            rep.argmax_f_x = r.x;
        }
        if (r.ratio_g > rep.max_ratio_g) {
            rep.max_ratio_g = r.ratio_g;
            rep.argmax_g_t = r.t;
            rep.argmax_g_x = r.x;
        }
        if (r.ratio_f > 1.0 + sampling.tol) flag("f", r.t, r.x, r.ratio_f);
        if (r.ratio_g > 1.0 + sampling.tol) flag("g", r.t, r.x, r.ratio_g);
    }
    for (double t : times) {
        for (double x : radii) {
            const double fv = pair.f(x, -t), gv = pair.g(x, -t);
            if (fv != 0.0 || gv != 0.0) {
                rep.initial_support_ok = false;
                flag("support", -t, x, std::max(std::abs(fv), std::abs(gv)));
            }
        }
    }
    if (rep.violation) {
        rep.verdict = Verdict::Violated;
        rep.message = "violation of " + rep.violation->which + " at t=" + std::to_string(rep.violation->t) +
                      ", |x|=" + std::to_string(rep.violation->x);
    } else if (rep.failed_samples > 0) {
        rep.verdict = Verdict::Inconclusive;
        rep.message = std::to_string(rep.failed_samples) + " samples failed to reach the quadrature tolerance";
    } else {
        rep.verdict = Verdict::Certified;
    }
    if (sampling.keep_records) rep.records = std::move(recs);
    return rep;
}

EnvelopeReport envelope_check(const SolutionPair& pair, const ProblemParams& params, std::vector<double> ladder,
                              const SampleConfig& sampling, const QuadratureConfig& quadrature) {
    const auto env = envelopes(params);
    sampling.validate();
    const double H = sampling.horizon.value_or(pair.horizon);
    if (ladder.empty()) ladder = log_spaced(H / 128.0, H, 8);
    const auto times = sampling.times(H);
    const auto radii = sampling.radii(H);
    EnvelopeReport rep;
    rep.rows.resize(ladder.size());
    parallel_for(ladder.size(), resolve_threads(sampling.threads), [&](std::size_t i) {
        const double T = ladder[i];
        if (!(T > 0.0)) throw DomainError("envelope_check: ladder values must be > 0");
        EnvelopeRow& row = rep.rows[i];
        row.T = T;
        auto scan = [&](double t) {
            for (double x : radii) {
                row.sup_f = std::max(row.sup_f, pair.f(x, t));
                row.sup_g = std::max(row.sup_g, pair.g(x, t));
            }
        };
        for (double t : times) {
            if (t <= T) scan(t);
        }
        scan(T);
        row.envelope_f = env.f(T);
        row.envelope_g = env.g(T);
        row.envelope_u = env.u(T);
        row.envelope_v = env.v(T);
        row.u0 = j_alpha(pair.f, 0.0, T, params.alpha, params.n, quadrature);
        row.v0 = j_alpha(pair.g, 0.0, T, params.beta, params.n, quadrature);
    });
    for (const auto& row : rep.rows) {
        rep.margin_f = std::max(rep.margin_f, row.sup_f / row.envelope_f);
        rep.margin_g = std::max(rep.margin_g, row.sup_g / row.envelope_g);
        rep.margin_u = std::max(rep.margin_u, row.u0 / row.envelope_u);
        rep.margin_v = std::max(rep.margin_v, row.v0 / row.envelope_v);
    }
    return rep;
}

PicardResult picard_iterate(const ProblemParams& params, const SolutionPair& seed, int steps, double T,
                            const PicardConfig& config, const QuadratureConfig& quadrature) {
    params.validate();
    quadrature.validate();
    if (steps < 0) throw DomainError("picard_iterate: steps must be >= 0");
    if (!(T > 0.0)) throw DomainError("picard_iterate: T must be > 0");
    if (config.time_nodes < 2 || config.shells < 1) throw DomainError("picard_iterate: grid too small");

    GridFunction proto;
    proto.times.push_back(0.0);
    for (double t : log_spaced(config.t_min_fraction * T, T, config.time_nodes)) proto.times.push_back(t);
    const bool constant = spatially_constant(seed.f) && spatially_constant(seed.g);
    const int shells = constant ? 1 : config.shells;
    const double width = shells > 1 ? config.radius_factor * std::sqrt(T) / (shells - 1) : 0.0;
    for (int k = 0; k < shells; ++k) proto.shell_edges.push_back(k * width);
    proto.values.assign(proto.times.size() * proto.shell_edges.size(), 0.0);
    proto.power_law = true;

    const bool subcritical = params.lambda * params.sigma < 1.0;
    std::optional<SharpConstants> sc;
    std::optional<Envelopes> env;
    if (subcritical && params.lambda * params.sigma <= kLambdaSigmaRefuse) {
        sc = sharp_constants(params);
        env = envelopes(params);
    }

    PicardResult res;
    res.T = T;
    auto record = [&](int k, const SolutionPair& p) {
        PicardStep st;
        st.k = k;
        for (double t : proto.times) {
            if (t > T) continue;
            for (double x : proto.shell_edges) {
                st.sup_f = std::max(st.sup_f, p.f(x, t));
                st.sup_g = std::max(st.sup_g, p.g(x, t));
            }
        }
        if (sc) {
            st.coef_f = st.sup_f / std::pow(T, sc->gamma1);
            st.coef_g = st.sup_g / std::pow(T, sc->gamma2);
            st.ratio_envelope_f = st.sup_f / env->f(T);
            st.ratio_envelope_g = st.sup_g / env->g(T);
        }
        res.trace.push_back(st);
        if (!std::isfinite(st.sup_f) || !std::isfinite(st.sup_g) || st.sup_f > config.overflow ||
            st.sup_g > config.overflow) {
            res.blowup_evidence = true;
        }
    };

    SolutionPair cur = seed;
    res.iterates.push_back(cur);
    record(0, cur);
    const std::size_t nr = proto.shell_edges.size();
    const int threads = resolve_threads(config.threads);
    for (int k = 1; k <= steps && !res.blowup_evidence; ++k) {
        GridFunction nf = proto, ng = proto;
        parallel_for(proto.values.size(), threads, [&](std::size_t i) {
            const double t = proto.times[i / nr];
            const double x = proto.shell_edges[i % nr];
            if (!(t > 0.0)) return;
            const double jg = j_alpha(cur.g, x, t, params.beta, params.n, quadrature);
            const double jf = j_alpha(cur.f, x, t, params.alpha, params.n, quadrature);
            nf.values[i] = params.K1 * std::pow(jg, params.lambda);
            ng.values[i] = params.K2 * std::pow(jf, params.sigma);
        });
        SolutionPair next;
        next.provenance = "picard";
        next.horizon = T;
        const bool finite = std::all_of(nf.values.begin(), nf.values.end(), [](double v) { return std::isfinite(v); }) &&
                            std::all_of(ng.values.begin(), ng.values.end(), [](double v) { return std::isfinite(v); });
        if (!finite) {
            res.blowup_evidence = true;
            PicardStep st;
            st.k = k;
            st.sup_f = st.sup_g = kInf;
            res.trace.push_back(st);
            break;
        }
        next.f = SpaceTimeFunction::grid(std::move(nf));
        next.g = SpaceTimeFunction::grid(std::move(ng));
        cur = std::move(next);
        res.iterates.push_back(cur);
        record(k, cur);
    }
    return res;
}

}  // namespace fracheat

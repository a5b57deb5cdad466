#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fracheat/constructions.hpp"
#include "fracheat/errors.hpp"
#include "fracheat/io.hpp"
#include "fracheat/params.hpp"
#include "fracheat/potential.hpp"
#include "fracheat/sharp_bounds.hpp"
#include "fracheat/verifier.hpp"

using namespace fracheat;
using io::Json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInconclusive = 3;

// Usage errors raised after parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParamFlags {
    std::string file;
    std::optional<int> n;
    std::optional<double> p, q, alpha, beta, lambda, sigma, K1, K2;

    void add(CLI::App* app) {
        app->add_option("--params", file, "JSON file with a params object or a document carrying one");
        app->add_option("--n", n, "Spatial dimension");
        app->add_option("--p", p);
        app->add_option("--q", q);
        app->add_option("--alpha", alpha);
        app->add_option("--beta", beta);
        app->add_option("--lambda", lambda);
        app->add_option("--sigma", sigma);
        app->add_option("--K1", K1);
        app->add_option("--K2", K2);
    }

    // Flags override the file, which overrides `base`.
    [[nodiscard]] ProblemParams resolve(ProblemParams base = {}) const {
        if (!file.empty()) {
            const Json j = io::read_json(file);
            base = io::decode_params(j.contains("params") ? j.at("params") : j);
        }
        if (n) base.n = *n;
        if (p) base.p = *p;
        if (q) base.q = *q;
        if (alpha) base.alpha = *alpha;
        if (beta) base.beta = *beta;
        if (lambda) base.lambda = *lambda;
        if (sigma) base.sigma = *sigma;
        if (K1) base.K1 = *K1;
        if (K2) base.K2 = *K2;
        base.validate();
        return base;
    }
};

struct QuadFlags {
    std::optional<int> time_nodes;
    std::optional<double> rel_tol;

    void add(CLI::App* app) {
        app->add_option("--quad-nodes", time_nodes, "Node budget per time integral");
        app->add_option("--quad-tol", rel_tol, "Target relative tolerance of time integrals");
    }
    [[nodiscard]] QuadratureConfig resolve(QuadratureConfig c = {}) const {
        if (time_nodes) c.time_nodes = *time_nodes;
        if (rel_tol) c.target_rel_tol = *rel_tol;
        c.validate();
        return c;
    }
};

struct SampleFlags {
    std::optional<int> time_samples, radial_shells;
    std::optional<double> horizon, tol, t_min_fraction, radius_factor;

    void add(CLI::App* app) {
        app->add_option("--time-samples", time_samples);
        app->add_option("--radial-shells", radial_shells);
        app->add_option("--horizon", horizon, "Sample window (t_min_fraction H, H)");
        app->add_option("--tol", tol, "Certification tolerance on the ratios");
        app->add_option("--t-min-fraction", t_min_fraction);
        app->add_option("--radius-factor", radius_factor);
    }
    [[nodiscard]] SampleConfig resolve(SampleConfig c = {}) const {
        if (time_samples) c.time_samples = *time_samples;
        if (radial_shells) c.radial_shells = *radial_shells;
        if (horizon) c.horizon = *horizon;
        if (tol) c.tol = *tol;
        if (t_min_fraction) c.t_min_fraction = *t_min_fraction;
        if (radius_factor) c.radius_factor = *radius_factor;
        c.validate();
        return c;
    }
};

struct Options {
    int threads = 0;
    std::string output;
    std::string format = "json";
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json base_config(const Options& opt, const ProblemParams& params) {
    return Json{{"params", io::encode(params)}, {"threads", resolve_threads(opt.threads)}, {"format", opt.format}};
}

// classify

int run_classify(const Options& opt, const ParamFlags& pf) {
    const auto params = pf.resolve();
    const auto report = classify(params);
    io::write_text(opt.output, dump(io::report_document("classify", base_config(opt, params), io::encode(report))));
    return 0;
}

// atlas

int run_atlas(const Options& opt, const ParamFlags& pf, const io::AtlasConfig& cfg) {
    auto base = pf.resolve();
    std::ostringstream os;
    io::write_atlas_csv(os, io::atlas(base, cfg));
    io::write_text(opt.output, os.str());
    return 0;
}

// constants

int run_constants(const Options& opt, const ParamFlags& pf, int steps) {
    const auto params = pf.resolve();
    Json result = io::encode(sharp_constants(params));
    if (steps > 0) result["delta_iteration"] = io::encode(delta_iteration(params, steps));
    Json cfg = base_config(opt, params);
    cfg["steps"] = steps;
    io::write_text(opt.output, dump(io::report_document("constants", cfg, result)));
    return 0;
}

// construct

struct ConstructFlags {
    std::string kind;
    std::optional<double> N1, N2;
    double fraction1 = 0.9;
    double fraction2 = 0.9;
    double T = 1.0;
    std::optional<double> r, s;
    BlowupOptions blowup;
    std::optional<double> rescale_T;
};

io::SolutionDocument build(const ProblemParams& params, const ConstructFlags& cf, const QuadratureConfig& quad) {
    io::SolutionDocument doc;
    doc.params = params;
    doc.construction = cf.kind;
    Json options = Json::object();
    if (cf.kind == "zero") {
        doc.pair = zero_pair(cf.T);
    } else if (cf.kind == "exact") {
        doc.pair = exact_solution_pair(params);
        doc.details = io::encode(sharp_constants(params));
    } else if (cf.kind == "mollified") {
        const auto c = sharp_constants(params);
        const double N1 = cf.N1.value_or(cf.fraction1 * c.M1);
        const double N2 = cf.N2.value_or(cf.fraction2 * c.M2);
        const auto res = mollified_pair(params, N1, N2, cf.T, quad);
        doc.pair = res.pair;
        doc.details = io::encode(res.spec);
        options = Json{{"N1", io::number(N1)}, {"N2", io::number(N2)}, {"T", io::number(cf.T)}};
    } else if (cf.kind == "paraboloid") {
        const auto res = paraboloid_pair(params);
        doc.pair = res.pair;
        doc.details = Json{{"L1", io::number(res.L1)},
                           {"L2", io::number(res.L2)},
                           {"N", io::number(res.N)},
                           {"C_alpha", io::number(res.C_alpha)},
                           {"C_beta", io::number(res.C_beta)}};
    } else if (cf.kind == "blowup-small") {
        double r = 0.0, s = 0.0;
        if (cf.r && cf.s) {
            r = *cf.r;
            s = *cf.s;
        } else {
            const auto c = pick_P1(params);
            r = cf.r.value_or(c.r);
            s = cf.s.value_or(c.s);
        }
        const auto res = blowup_small_time(params, r, s, cf.blowup);
        doc.pair = res.pair;
        doc.details = io::encode(res.spec);
        doc.details["lp_norm_f"] = io::encode(lp_norm_finite(res.pair.f, params.p, params.n));
        options = Json{{"r", io::number(r)}, {"s", io::number(s)}, {"blowup", io::encode(cf.blowup)}};
    } else if (cf.kind == "blowup-large") {
        const auto be = blowup_exponents(params);
        const double r = cf.r.value_or(be.r0);
        const double s = cf.s.value_or(be.s0_large);
        const auto res = blowup_large_time(params, r, s, cf.blowup);
        doc.pair = res.pair;
        doc.details = io::encode(res.spec);
        doc.details["P4"] = io::encode(intersection_P4(params));
        doc.details["exponents"] = io::encode(be);
        options = Json{{"r", io::number(r)}, {"s", io::number(s)}, {"blowup", io::encode(cf.blowup)}};
    } else {
        throw UsageError("unknown construction '" + cf.kind + "'");
    }
    if (cf.rescale_T) {
        doc.pair = rescale(doc.pair, *cf.rescale_T, params);
        options["rescale_T"] = io::number(*cf.rescale_T);
    }
    doc.config = Json{{"options", options}, {"quadrature", io::encode(quad)}};
    return doc;
}

int run_construct(const Options& opt, const ParamFlags& pf, const QuadFlags& qf, const ConstructFlags& cf) {
    const auto params = pf.resolve();
    const auto quad = qf.resolve();
    auto doc = build(params, cf, quad);
    Json cfg = base_config(opt, params);
    cfg.update(doc.config);
    doc.config = cfg;
    io::write_text(opt.output, dump(io::encode(doc)));
    return 0;
}

// verify

int run_verify(const Options& opt, const ParamFlags& pf, const QuadFlags& qf, const SampleFlags& sf,
               const std::string& input, bool envelope, bool records) {
    const auto doc = io::decode_solution(io::read_json(input));
    const auto params = pf.resolve(doc.params);
    const auto quad = qf.resolve();
    auto sampling = sf.resolve();
    sampling.threads = resolve_threads(opt.threads);
    sampling.keep_records = records || opt.format == "csv";
    const auto report = check_system(doc.pair, params, sampling, quad);

    if (opt.format == "csv") {
        std::ostringstream os;
        io::write_samples_csv(os, report);
        io::write_text(opt.output, os.str());
        return exit_code(report.verdict);
    }
    Json result = io::encode(report);
    if (envelope && params.lambda * params.sigma < 1.0) {
        result["envelope"] = io::encode(envelope_check(doc.pair, params, {}, sampling, quad));
    }
    Json cfg = base_config(opt, params);
    cfg["input"] = input;
    cfg["construction"] = doc.construction;
    cfg["sampling"] = io::encode(sampling);
    cfg["quadrature"] = io::encode(quad);
    io::write_text(opt.output, dump(io::report_document("verify", cfg, result)));
    return exit_code(report.verdict);
}

// picard

int run_picard(const Options& opt, const ParamFlags& pf, const QuadFlags& qf, const std::string& seed,
               double scale, int steps, double T, PicardConfig pc) {
    ProblemParams params;
    SolutionPair pair;
    if (seed == "exact" || seed == "envelope") {
        params = pf.resolve();
        pair = exact_solution_pair(params);
    } else if (seed == "zero") {
        params = pf.resolve();
        pair = zero_pair(T);
    } else {
        const auto doc = io::decode_solution(io::read_json(seed));
        params = pf.resolve(doc.params);
        pair = doc.pair;
    }
    pair.f.amplitude *= scale;
    pair.g.amplitude *= scale;
    const auto quad = qf.resolve();
    pc.threads = resolve_threads(opt.threads);
    const auto res = picard_iterate(params, pair, steps, T, pc, quad);
    if (opt.format == "csv") {
        std::ostringstream os;
        io::write_picard_csv(os, res);
        io::write_text(opt.output, os.str());
        return 0;
    }
    Json cfg = base_config(opt, params);
    cfg["seed"] = seed;
    cfg["scale"] = io::number(scale);
    cfg["steps"] = steps;
    cfg["T"] = io::number(T);
    cfg["picard"] = io::encode(pc);
    cfg["quadrature"] = io::encode(quad);
    io::write_text(opt.output, dump(io::report_document("picard", cfg, io::encode(res))));
    return 0;
}

// potential

int run_potential(const Options& opt, const ParamFlags& pf, const QuadFlags& qf, const std::string& input,
                  const std::string& component, std::optional<double> gamma, std::optional<double> order,
                  const std::vector<double>& xs, const std::vector<double>& ts) {
    ProblemParams params;
    SpaceTimeFunction fn;
    double a = 0.0;
    if (!input.empty()) {
        const auto doc = io::decode_solution(io::read_json(input));
        params = pf.resolve(doc.params);
        if (component == "f") {
            fn = doc.pair.f;
            a = params.alpha;
        } else if (component == "g") {
            fn = doc.pair.g;
            a = params.beta;
        } else {
            throw UsageError("--component must be f or g");
        }
    } else {
        if (!gamma) throw UsageError("potential needs --input or --gamma");
        params = pf.resolve();
        fn = SpaceTimeFunction::separable(Constant1{}, TimeProfile::power(1.0, *gamma));
        a = params.alpha;
    }
    if (order) a = *order;
    if (xs.empty() || ts.empty()) throw UsageError("potential needs at least one --x and one --t");
    const auto quad = qf.resolve();

    struct Point {
        double x, t, value;
    };
    std::vector<Point> pts;
    for (double t : ts) {
        for (double x : xs) {
            if (x < 0.0) throw UsageError("--x takes |x| >= 0");
            pts.push_back({x, t, j_alpha(fn, x, t, a, params.n, quad)});
        }
    }
    if (opt.format == "csv") {
        std::ostringstream os;
        os << io::kPotentialCsv << '\n' << "x,t,j\n";
        for (const auto& p : pts) {
            os << io::format_number(p.x) << ',' << io::format_number(p.t) << ',' << io::format_number(p.value) << '\n';
        }
        io::write_text(opt.output, os.str());
        return 0;
    }
    Json values = Json::array();
    for (const auto& p : pts) {
        values.push_back(Json{{"x", io::number(p.x)}, {"t", io::number(p.t)}, {"j", io::number(p.value)}});
    }
    Json cfg = base_config(opt, params);
    cfg["order"] = io::number(a);
    cfg["quadrature"] = io::encode(quad);
    if (!input.empty()) {
        cfg["input"] = input;
        cfg["component"] = component;
    } else {
        cfg["gamma"] = io::number(*gamma);
    }
    io::write_text(opt.output, dump(io::report_document("potential", cfg, Json{{"values", values}})));
    return 0;
}

int fail(std::string_view type, std::string_view message, int code) {
    std::cout << dump(io::error_document(type, message, code));
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional heat inequality systems: regimes, sharp bounds, constructions and verification"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    app.add_option("--threads", opt.threads, "Worker threads (default: FRACHEAT_THREADS, else all cores)")
        ->check(CLI::NonNegativeNumber);
    app.add_option("-o,--output", opt.output, "Output path (default stdout)");
    app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

    ParamFlags pf;
    QuadFlags qf;
    SampleFlags sf;

    auto* classify_cmd = app.add_subcommand("classify", "Region and outcome of a parameter point");
    pf.add(classify_cmd);

    io::AtlasConfig atlas_cfg;
    auto* atlas_cmd = app.add_subcommand("atlas", "CSV sweep of the (lambda, sigma) plane");
    pf.add(atlas_cmd);
    atlas_cmd->add_option("--lambda-max", atlas_cfg.lambda_max);
    atlas_cmd->add_option("--sigma-max", atlas_cfg.sigma_max);
    atlas_cmd->add_option("--lambda-cells", atlas_cfg.lambda_cells);
    atlas_cmd->add_option("--sigma-cells", atlas_cfg.sigma_cells);
    atlas_cmd->add_option("--curve-samples", atlas_cfg.curve_samples);
    atlas_cmd->add_flag("--xi-eta", atlas_cfg.xi_eta, "Add the lines of the (xi, eta) plane");

    int delta_steps = 0;
    auto* constants_cmd = app.add_subcommand("constants", "Sharp constants and envelope coefficients");
    pf.add(constants_cmd);
    constants_cmd->add_option("--delta-steps", delta_steps, "Also run the delta iteration")
        ->check(CLI::NonNegativeNumber);

    ConstructFlags cf;
    auto* construct_cmd = app.add_subcommand("construct", "Build a solution pair and write its JSON document");
    pf.add(construct_cmd);
    qf.add(construct_cmd);
    construct_cmd->add_option("kind", cf.kind, "zero | exact | mollified | paraboloid | blowup-small | blowup-large")
        ->required()
        ->check(CLI::IsMember({"zero", "exact", "mollified", "paraboloid", "blowup-small", "blowup-large"}));
    construct_cmd->add_option("--N1", cf.N1, "Growth constant of f (mollified)");
    construct_cmd->add_option("--N2", cf.N2, "Growth constant of g (mollified)");
    construct_cmd->add_option("--fraction1", cf.fraction1, "N1 = fraction1 * M1 when --N1 is absent");
    construct_cmd->add_option("--fraction2", cf.fraction2, "N2 = fraction2 * M2 when --N2 is absent");
    construct_cmd->add_option("--T", cf.T, "Time scale (mollified) or horizon (zero)");
    construct_cmd->add_option("--r", cf.r, "Integrability exponent of f (blow-up)");
    construct_cmd->add_option("--s", cf.s, "Integrability exponent of g (blow-up)");
    construct_cmd->add_option("--terms", cf.blowup.J, "Number of blow-up pieces");
    construct_cmd->add_option("--T1", cf.blowup.T1, "First blow-up time (0: default)");
    construct_cmd->add_option("--ratio", cf.blowup.ratio, "Ratio of successive blow-up times (0: default)");
    construct_cmd->add_option("--margin", cf.blowup.margin, "Thinning margin");
    construct_cmd->add_option("--rescale", cf.rescale_T, "Apply the scaling map with this T");

    std::string verify_input;
    bool verify_envelope = false, verify_records = false;
    auto* verify_cmd = app.add_subcommand("verify", "Check a solution document against the system");
    pf.add(verify_cmd);
    qf.add(verify_cmd);
    sf.add(verify_cmd);
    verify_cmd->add_option("input", verify_input, "Solution document ('-' for stdin)")->required();
    verify_cmd->add_flag("--envelope", verify_envelope, "Also compare against the sharp envelopes");
    verify_cmd->add_flag("--records", verify_records, "Include per-sample records in the JSON report");

    std::string picard_seed = "envelope";
    double picard_scale = 1.0, picard_T = 1.0;
    int picard_steps = 10;
    PicardConfig pc;
    auto* picard_cmd = app.add_subcommand("picard", "Picard iteration of the system on a grid");
    pf.add(picard_cmd);
    qf.add(picard_cmd);
    picard_cmd->add_option("--seed", picard_seed, "envelope | exact | zero | path to a solution document");
    picard_cmd->add_option("--scale", picard_scale, "Multiply the seed amplitudes")->check(CLI::NonNegativeNumber);
    picard_cmd->add_option("--steps", picard_steps)->check(CLI::NonNegativeNumber);
    picard_cmd->add_option("--T", picard_T, "Horizon");
    picard_cmd->add_option("--grid-times", pc.time_nodes);
    picard_cmd->add_option("--grid-shells", pc.shells);

    std::string pot_input, pot_component = "f";
    std::optional<double> pot_gamma, pot_order;
    std::vector<double> pot_x, pot_t;
    auto* potential_cmd = app.add_subcommand("potential", "Evaluate J_alpha at given points");
    pf.add(potential_cmd);
    qf.add(potential_cmd);
    potential_cmd->add_option("--input", pot_input, "Solution document");
    potential_cmd->add_option("--component", pot_component, "f (order alpha) or g (order beta)");
    potential_cmd->add_option("--gamma", pot_gamma, "Evaluate on t^gamma instead of a document");
    potential_cmd->add_option("--order", pot_order, "Override the order of J");
    potential_cmd->add_option("--x", pot_x, "Radii |x|")->delimiter(',');
    potential_cmd->add_option("--t", pot_t, "Times")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), kExitUsage);
    }

    try {
        if (*classify_cmd) return run_classify(opt, pf);
        if (*atlas_cmd) return run_atlas(opt, pf, atlas_cfg);
        if (*constants_cmd) return run_constants(opt, pf, delta_steps);
        if (*construct_cmd) return run_construct(opt, pf, qf, cf);
        if (*verify_cmd) {
            return run_verify(opt, pf, qf, sf, verify_input, verify_envelope, verify_records);
        }
        if (*picard_cmd) {
            return run_picard(opt, pf, qf, picard_seed, picard_scale, picard_steps, picard_T, pc);
        }
        if (*potential_cmd) {
            return run_potential(opt, pf, qf, pot_input, pot_component, pot_gamma, pot_order, pot_x, pot_t);
        }
    } catch (const UsageError& e) {
        return fail("usage", e.what(), kExitUsage);
    } catch (const io::FormatError& e) {
        return fail("format", e.what(), kExitUsage);
    } catch (const DomainError& e) {
        return fail("domain", e.what(), kExitUsage);
    } catch (const Infeasible& e) {
        return fail("infeasible", e.what(), kExitUsage);
    } catch (const SearchFailure& e) {
        return fail("search_failure", e.what(), kExitInconclusive);
    } catch (const QuadratureFailure& e) {
        return fail("quadrature_failure", e.what(), kExitInconclusive);
    } catch (const std::exception& e) {
        return fail("internal", e.what(), kExitInconclusive);
    }
    return kExitUsage;
}

#include "fracheat/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>

#include "fracheat/errors.hpp"

namespace fracheat::io {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
    return j.at(key);
}

double num_or(const Json& j, const char* key, double fallback) {
    return j.contains(key) ? to_double(j.at(key)) : fallback;
}

int int_or(const Json& j, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number_integer()) throw FormatError(std::string("field '") + key + "' must be an integer");
    return v.get<int>();
}

bool bool_or(const Json& j, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_boolean()) throw FormatError(std::string("field '") + key + "' must be a boolean");
    return v.get<bool>();
}

Json numbers(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(number(x));
    return a;
}

std::vector<double> to_doubles(const Json& j) {
    if (!j.is_array()) throw FormatError("expected an array of numbers");
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& x : j) v.push_back(to_double(x));
    return v;
}

template <class T>
Json opt(const std::optional<T>& v) {
    return v ? number(*v) : Json(nullptr);
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

Json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double to_double(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw FormatError("expected a number, \"inf\", \"-inf\" or \"nan\", got " + j.dump());
}

Json encode(const ProblemParams& p) {
    return Json{{"n", p.n},           {"p", number(p.p)},         {"q", number(p.q)},
                {"alpha", number(p.alpha)}, {"beta", number(p.beta)}, {"lambda", number(p.lambda)},
                {"sigma", number(p.sigma)}, {"K1", number(p.K1)},     {"K2", number(p.K2)}};
}

ProblemParams decode_params(const Json& j) {
    if (!j.is_object()) throw FormatError("params must be an object");
    ProblemParams p;
    p.n = int_or(j, "n", p.n);
    p.p = num_or(j, "p", p.p);
    p.q = num_or(j, "q", p.q);
    p.alpha = num_or(j, "alpha", p.alpha);
    p.beta = num_or(j, "beta", p.beta);
    p.lambda = num_or(j, "lambda", p.lambda);
    p.sigma = num_or(j, "sigma", p.sigma);
    p.K1 = num_or(j, "K1", p.K1);
    p.K2 = num_or(j, "K2", p.K2);
    return p;
}

Json encode(const QuadratureConfig& c) {
    return Json{{"time_nodes", c.time_nodes},
                {"singularity_split", c.singularity_split},
                {"spatial_truncation", number(c.spatial_truncation)},
                {"spatial_nodes", c.spatial_nodes},
                {"target_rel_tol", number(c.target_rel_tol)}};
}

QuadratureConfig decode_quadrature(const Json& j) {
    QuadratureConfig c;
    if (j.is_null()) return c;
    c.time_nodes = int_or(j, "time_nodes", c.time_nodes);
    c.singularity_split = bool_or(j, "singularity_split", c.singularity_split);
    c.spatial_truncation = num_or(j, "spatial_truncation", c.spatial_truncation);
    c.spatial_nodes = int_or(j, "spatial_nodes", c.spatial_nodes);
    c.target_rel_tol = num_or(j, "target_rel_tol", c.target_rel_tol);
    return c;
}

Json encode(const SampleConfig& c) {
    return Json{{"time_samples", c.time_samples},
                {"radial_shells", c.radial_shells},
                {"t_min_fraction", number(c.t_min_fraction)},
                {"radius_factor", number(c.radius_factor)},
                {"horizon", opt(c.horizon)},
                {"tol", number(c.tol)},
                {"threads", c.threads},
                {"keep_records", c.keep_records}};
}

SampleConfig decode_sampling(const Json& j) {
    SampleConfig c;
    if (j.is_null()) return c;
    c.time_samples = int_or(j, "time_samples", c.time_samples);
    c.radial_shells = int_or(j, "radial_shells", c.radial_shells);
    c.t_min_fraction = num_or(j, "t_min_fraction", c.t_min_fraction);
    c.radius_factor = num_or(j, "radius_factor", c.radius_factor);
    if (j.contains("horizon") && !j.at("horizon").is_null()) c.horizon = to_double(j.at("horizon"));
    c.tol = num_or(j, "tol", c.tol);
    c.threads = int_or(j, "threads", c.threads);
    c.keep_records = bool_or(j, "keep_records", c.keep_records);
    return c;
}

Json encode(const PicardConfig& c) {
    return Json{{"time_nodes", c.time_nodes},         {"t_min_fraction", number(c.t_min_fraction)},
                {"shells", c.shells},                 {"radius_factor", number(c.radius_factor)},
                {"threads", c.threads},               {"overflow", number(c.overflow)}};
}

PicardConfig decode_picard(const Json& j) {
    PicardConfig c;
    if (j.is_null()) return c;
    c.time_nodes = int_or(j, "time_nodes", c.time_nodes);
    c.t_min_fraction = num_or(j, "t_min_fraction", c.t_min_fraction);
    c.shells = int_or(j, "shells", c.shells);
    c.radius_factor = num_or(j, "radius_factor", c.radius_factor);
    c.threads = int_or(j, "threads", c.threads);
    c.overflow = num_or(j, "overflow", c.overflow);
    return c;
}

Json encode(const BlowupOptions& o) {
    return Json{{"J", o.J}, {"T1", number(o.T1)}, {"ratio", number(o.ratio)}, {"margin", number(o.margin)}};
}

Json encode(const TimeProfile& tp) {
    Json pieces = Json::array();
    for (const auto& pc : tp.pieces) {
        pieces.push_back(Json{{"lo", number(pc.lo)},
                              {"hi", number(pc.hi)},
                              {"coef", number(pc.coef)},
                              {"exponent", number(pc.exponent)},
                              {"origin", number(pc.origin)},
                              {"reflected", pc.reflected}});
    }
    Json cutoff = nullptr;
    if (tp.cutoff) cutoff = Json{{"start", number(tp.cutoff->start)}, {"width", number(tp.cutoff->width)}};
    return Json{{"pieces", pieces}, {"cutoff", cutoff}};
}

TimeProfile decode_time_profile(const Json& j) {
    TimeProfile tp;
    for (const auto& pj : field(j, "pieces")) {
        PowerPiece pc;
        pc.lo = to_double(field(pj, "lo"));
        pc.hi = to_double(field(pj, "hi"));
        pc.coef = to_double(field(pj, "coef"));
        pc.exponent = to_double(field(pj, "exponent"));
        pc.origin = num_or(pj, "origin", 0.0);
        pc.reflected = bool_or(pj, "reflected", false);
        tp.pieces.push_back(pc);
    }
    if (j.contains("cutoff") && !j.at("cutoff").is_null()) {
        const auto& c = j.at("cutoff");
        tp.cutoff = SmoothCutoff{to_double(field(c, "start")), to_double(field(c, "width"))};
    }
    return tp;
}

Json encode(const RadialProfile& rp) {
    if (std::holds_alternative<Constant1>(rp)) return Json{{"type", "constant"}};
    if (const auto* e = std::get_if<ExpPhi>(&rp)) {
        return Json{{"type", "expphi"}, {"eps", number(e->eps)}, {"power", number(e->power)}};
    }
    const auto& pb = std::get<Paraboloid>(rp);
    return Json{{"type", "paraboloid"}, {"origin", number(pb.origin)}, {"reflected", pb.reflected}};
}

RadialProfile decode_radial(const Json& j) {
    const auto type = field(j, "type").get<std::string>();
    if (type == "constant") return Constant1{};
    if (type == "expphi") return ExpPhi{to_double(field(j, "eps")), to_double(field(j, "power"))};
    if (type == "paraboloid") return Paraboloid{num_or(j, "origin", 0.0), bool_or(j, "reflected", false)};
    throw FormatError("unknown spatial profile '" + type + "'");
}

Json encode(const SpaceTimeFunction& fn) {
    Json comps = Json::array();
    for (const auto& c : fn.components) {
        if (const auto* s = std::get_if<SeparableTerm>(&c)) {
            comps.push_back(Json{{"type", "separable"}, {"spatial", encode(s->spatial)}, {"temporal", encode(s->temporal)}});
        } else {
            const auto& g = std::get<GridFunction>(c);
            comps.push_back(Json{{"type", "grid"},
                                 {"times", numbers(g.times)},
                                 {"shell_edges", numbers(g.shell_edges)},
                                 {"values", numbers(g.values)},
                                 {"power_law", g.power_law}});
        }
    }
    return Json{{"amplitude", number(fn.amplitude)}, {"time_scale", number(fn.time_scale)}, {"components", comps}};
}

SpaceTimeFunction decode_function(const Json& j) {
    SpaceTimeFunction fn;
    fn.amplitude = num_or(j, "amplitude", 1.0);
    fn.time_scale = num_or(j, "time_scale", 1.0);
    for (const auto& cj : field(j, "components")) {
        const auto type = field(cj, "type").get<std::string>();
        if (type == "separable") {
            fn.components.emplace_back(
                SeparableTerm{decode_radial(field(cj, "spatial")), decode_time_profile(field(cj, "temporal"))});
        } else if (type == "grid") {
            GridFunction g;
            g.times = to_doubles(field(cj, "times"));
            g.shell_edges = to_doubles(field(cj, "shell_edges"));
            g.values = to_doubles(field(cj, "values"));
            g.power_law = bool_or(cj, "power_law", false);
            try {
                g.validate();
            } catch (const DomainError& e) {
                throw FormatError(std::string("invalid grid component: ") + e.what());
            }
            fn.components.emplace_back(std::move(g));
        } else {
            throw FormatError("unknown component type '" + type + "'");
        }
    }
    return fn;
}

Json encode(const SolutionPair& pair) {
    return Json{{"provenance", pair.provenance}, {"scale_T", number(pair.scale_T)},
                {"factor_f", number(pair.factor_f)}, {"factor_g", number(pair.factor_g)},
                {"horizon", number(pair.horizon)},   {"f", encode(pair.f)},
                {"g", encode(pair.g)}};
}

SolutionPair decode_pair(const Json& j) {
    SolutionPair pair;
    pair.provenance = j.value("provenance", std::string{});
    pair.scale_T = num_or(j, "scale_T", 1.0);
    pair.factor_f = num_or(j, "factor_f", 1.0);
    pair.factor_g = num_or(j, "factor_g", 1.0);
    pair.horizon = num_or(j, "horizon", 1.0);
    pair.f = decode_function(field(j, "f"));
    pair.g = decode_function(field(j, "g"));
    return pair;
}

Json encode(const RegimeReport& r) {
    return Json{{"region", std::string(to_string(r.region))},
                {"outcome", std::string(to_string(r.outcome))},
                {"mu", opt(r.mu_at_lambda)},
                {"nu", opt(r.nu_at_lambda)},
                {"lambda0", opt(r.lambda0)},
                {"sigma0", opt(r.sigma0)},
                {"r0", opt(r.r0)},
                {"s0_large_time", opt(r.s0_large_time)},
                {"s0_small_time", opt(r.s0_small_time)},
                {"swapped", r.swapped},
                {"admissible_u", r.admissible_u},
                {"admissible_v", r.admissible_v},
                {"boundary_note", r.boundary_note}};
}

Json encode(const SharpConstants& c) {
    return Json{{"gamma1", number(c.gamma1)}, {"gamma2", number(c.gamma2)}, {"M1", number(c.M1)},
                {"M2", number(c.M2)},         {"B", number(c.B)},           {"log_M1", number(c.log_M1)},
                {"log_M2", number(c.log_M2)}, {"log_B", number(c.log_B)},   {"kappa", number(c.kappa)},
                {"f_coef", number(c.f_coef)}, {"g_coef", number(c.g_coef)}, {"u_coef", number(c.u_coef)},
                {"v_coef", number(c.v_coef)}, {"near_boundary", c.near_boundary}};
}

Json encode(const DeltaIteration& d) {
    return Json{{"delta", numbers(d.delta)},
                {"limit", number(d.limit)},
                {"rate", number(d.rate)},
                {"observed_rate", number(d.observed_rate)}};
}

Json encode(const MollifiedPairSpec& s) {
    return Json{{"N1", number(s.N1)},
                {"N2", number(s.N2)},
                {"m", number(s.m)},
                {"a1_reference", number(s.a1_reference)},
                {"a2_lo", number(s.a2_lo)},
                {"a2_hi", number(s.a2_hi)},
                {"a1", number(s.a1)},
                {"a2", number(s.a2)},
                {"exact_growth", s.exact_growth},
                {"delta", number(s.delta)},
                {"gamma_trunc", number(s.gamma_trunc)},
                {"epsilon", number(s.epsilon)},
                {"lower_bound_g", number(s.lower_bound_g)},
                {"lower_bound_f", number(s.lower_bound_f)},
                {"T", number(s.T)}};
}

Json encode(const BlowupFamilySpec& s) {
    return Json{{"xi", number(s.xi)},       {"eta", number(s.eta)},       {"T_j", numbers(s.T_j)},
                {"t_j", numbers(s.t_j)},    {"r", number(s.r)},           {"s", number(s.s)},
                {"C_f", number(s.C_f)},     {"C_g", number(s.C_g)},       {"amp_f", number(s.amp_f)},
                {"amp_g", number(s.amp_g)}, {"thinned", s.thinned}};
}

Json encode(const LpNormResult& r) {
    return Json{{"finite", r.finite}, {"value", number(r.value)}, {"value_is_bound", r.value_is_bound}};
}

Json encode(const XiEtaGeometry& g) {
    return Json{{"xi0", number(g.xi0)},   {"eta0", number(g.eta0)}, {"eta2", number(g.eta2)},
                {"eta3", number(g.eta3)}, {"s0", number(g.s0)},     {"sigma_below_sigma0", g.sigma_below_sigma0}};
}

Json encode(const P1Choice& c) {
    return Json{{"xi1", number(c.xi1)}, {"eta1", number(c.eta1)}, {"r", number(c.r)}, {"s", number(c.s)}};
}

Json encode(const P4Point& p) { return Json{{"xi4", number(p.xi4)}, {"eta4", number(p.eta4)}}; }

Json encode(const BlowupExponents& b) {
    return Json{{"r0", number(b.r0)}, {"s0_large", number(b.s0_large)}, {"s0_small", number(b.s0_small)}};
}

Json encode(const VerificationReport& r) {
    Json j{{"verdict", std::string(to_string(r.verdict))},
           {"max_ratio_f", number(r.max_ratio_f)},
           {"max_ratio_g", number(r.max_ratio_g)},
           {"argmax_f", Json{{"t", number(r.argmax_f_t)}, {"x", number(r.argmax_f_x)}}},
           {"argmax_g", Json{{"t", number(r.argmax_g_t)}, {"x", number(r.argmax_g_x)}}},
           {"initial_support_ok", r.initial_support_ok},
           {"nonnegative_ok", r.nonnegative_ok},
           {"samples", r.samples},
           {"failed_samples", r.failed_samples},
           {"horizon", number(r.horizon)},
           {"sampling", encode(r.sampling)},
           {"quadrature", encode(r.quadrature)},
           {"violation", nullptr},
           {"message", r.message}};
    if (r.violation) {
        j["violation"] = Json{{"which", r.violation->which},
                              {"t", number(r.violation->t)},
                              {"x", number(r.violation->x)},
                              {"value", number(r.violation->value)}};
    }
    if (!r.records.empty()) {
        Json recs = Json::array();
        for (const auto& s : r.records) {
            recs.push_back(Json{{"t", number(s.t)},
                                {"x", number(s.x)},
                                {"f", number(s.f)},
                                {"g", number(s.g)},
                                {"j_alpha_f", number(s.j_alpha_f)},
                                {"j_beta_g", number(s.j_beta_g)},
                                {"ratio_f", number(s.ratio_f)},
                                {"ratio_g", number(s.ratio_g)},
                                {"failed", s.failed}});
        }
        j["records"] = recs;
    }
    return j;
}

Json encode(const EnvelopeReport& r) {
    Json rows = Json::array();
    for (const auto& row : r.rows) {
        rows.push_back(Json{{"T", number(row.T)},
                            {"sup_f", number(row.sup_f)},
                            {"sup_g", number(row.sup_g)},
                            {"envelope_f", number(row.envelope_f)},
                            {"envelope_g", number(row.envelope_g)},
                            {"u0", number(row.u0)},
                            {"v0", number(row.v0)},
                            {"envelope_u", number(row.envelope_u)},
                            {"envelope_v", number(row.envelope_v)}});
    }
    return Json{{"margin_f", number(r.margin_f)},
                {"margin_g", number(r.margin_g)},
                {"margin_u", number(r.margin_u)},
                {"margin_v", number(r.margin_v)},
                {"rows", rows}};
}

Json encode(const PicardResult& r) {
    Json trace = Json::array();
    for (const auto& s : r.trace) {
        trace.push_back(Json{{"k", s.k},
                             {"sup_f", number(s.sup_f)},
                             {"sup_g", number(s.sup_g)},
                             {"coef_f", number(s.coef_f)},
                             {"coef_g", number(s.coef_g)},
                             {"ratio_envelope_f", number(s.ratio_envelope_f)},
                             {"ratio_envelope_g", number(s.ratio_envelope_g)}});
    }
    return Json{{"T", number(r.T)}, {"blowup_evidence", r.blowup_evidence}, {"trace", trace}};
}

Json encode(const SolutionDocument& doc) {
    return Json{{"schema", std::string(kSolutionSchema)},
                {"construction", doc.construction},
                {"params", encode(doc.params)},
                {"config", doc.config},
                {"details", doc.details},
                {"pair", encode(doc.pair)}};
}

SolutionDocument decode_solution(const Json& j) {
    if (!j.is_object()) throw FormatError("solution document must be an object");
    const auto schema = field(j, "schema");
    if (!schema.is_string() || schema.get<std::string>() != kSolutionSchema) {
        throw FormatError("unsupported schema " + schema.dump() + ", expected \"" +
                          std::string(kSolutionSchema) + "\"");
    }
    SolutionDocument doc;
    doc.construction = j.value("construction", std::string{});
    doc.params = decode_params(field(j, "params"));
    if (j.contains("config")) doc.config = j.at("config");
    if (j.contains("details")) doc.details = j.at("details");
    doc.pair = decode_pair(field(j, "pair"));
    return doc;
}

Json report_document(std::string_view command, Json config, Json result) {
    return Json{{"schema", std::string(kReportSchema)},
                {"command", std::string(command)},
                {"config", std::move(config)},
                {"result", std::move(result)}};
}

Json error_document(std::string_view type, std::string_view message, int exit_code) {
    return Json{{"schema", std::string(kErrorSchema)},
                {"error", Json{{"type", std::string(type)}, {"message", std::string(message)}}},
                {"exit_code", exit_code}};
}

Json read_json(const std::string& path) {
    try {
        if (path == "-") return Json::parse(std::cin);
        std::ifstream in(path);
        if (!in) throw FormatError("cannot open '" + path + "'");
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write '" + path + "'");
    out << text;
}

void write_samples_csv(std::ostream& os, const VerificationReport& r) {
    os << kSamplesCsv << '\n' << "t,x,f,g,j_alpha_f,j_beta_g,ratio_f,ratio_g,failed\n";
    for (const auto& s : r.records) {
        os << format_number(s.t) << ',' << format_number(s.x) << ',' << format_number(s.f) << ',' << format_number(s.g) << ','
           << format_number(s.j_alpha_f) << ',' << format_number(s.j_beta_g) << ',' << format_number(s.ratio_f) << ','
           << format_number(s.ratio_g) << ',' << (s.failed ? 1 : 0) << '\n';
    }
}

void write_picard_csv(std::ostream& os, const PicardResult& r) {
    os << kPicardCsv << '\n' << "k,sup_f,sup_g,coef_f,coef_g,ratio_envelope_f,ratio_envelope_g\n";
    for (const auto& s : r.trace) {
        os << s.k << ',' << format_number(s.sup_f) << ',' << format_number(s.sup_g) << ',' << format_number(s.coef_f) << ','
           << format_number(s.coef_g) << ',' << format_number(s.ratio_envelope_f) << ',' << format_number(s.ratio_envelope_g)
           << '\n';
    }
}

void write_envelope_csv(std::ostream& os, const EnvelopeReport& r) {
    os << kEnvelopeCsv << '\n' << "T,sup_f,envelope_f,sup_g,envelope_g,u0,envelope_u,v0,envelope_v\n";
    for (const auto& row : r.rows) {
        os << format_number(row.T) << ',' << format_number(row.sup_f) << ',' << format_number(row.envelope_f) << ','
           << format_number(row.sup_g) << ',' << format_number(row.envelope_g) << ',' << format_number(row.u0) << ','
           << format_number(row.envelope_u) << ',' << format_number(row.v0) << ',' << format_number(row.envelope_v) << '\n';
    }
}

void AtlasConfig::validate() const {
    if (!(lambda_max > 0.0) || !(sigma_max > 0.0) || !std::isfinite(lambda_max) || !std::isfinite(sigma_max)) {
        throw DomainError("atlas: empty lambda or sigma range");
    }
    if (lambda_cells < 1 || sigma_cells < 1) throw DomainError("atlas: resolutions must be >= 1");
    if (curve_samples < 2) throw DomainError("atlas: curve_samples must be >= 2");
}

std::vector<AtlasRow> atlas(const ProblemParams& params, const AtlasConfig& cfg) {
    cfg.validate();
    std::vector<AtlasRow> rows;
    rows.reserve(static_cast<std::size_t>(cfg.lambda_cells) * cfg.sigma_cells + 3 * cfg.curve_samples + 1);
    ProblemParams p = params;
    for (int i = 1; i <= cfg.lambda_cells; ++i) {
        p.lambda = cfg.lambda_max * i / cfg.lambda_cells;
        for (int j = 1; j <= cfg.sigma_cells; ++j) {
            p.sigma = cfg.sigma_max * j / cfg.sigma_cells;
            const auto r = classify_region(p);
            rows.push_back({"cell", p.lambda, p.sigma, std::string(to_string(r.region)),
                            std::string(to_string(r.outcome))});
        }
    }
    const int m = cfg.curve_samples;
    for (int i = 1; i <= m; ++i) {
        const double l = cfg.lambda_max * i / m;
        rows.push_back({"mu", l, mu(l, params.n, params.p, params.alpha, params.beta), "", ""});
    }
    for (int i = 1; i <= m; ++i) {
        const double l = cfg.lambda_max * i / m;
        rows.push_back({"nu", l, nu(l, params.n, params.p, params.q, params.alpha, params.beta), "", ""});
    }
    const auto cp = critical_point(params.n, params.p, params.q, params.alpha, params.beta);
    rows.push_back({"critical", cp.lambda0, cp.sigma0, "", ""});
    if (cfg.xi_eta) {
        const double xi_max = (params.n + 2.0) / params.p;
        for (int i = 0; i <= m; ++i) {
            const double xi = xi_max * i / m;
            rows.push_back({"xi_line", xi, params.beta + xi / params.lambda, "", ""});
        }
        for (int i = 0; i <= m; ++i) {
            const double xi = xi_max * i / m;
            rows.push_back({"eta_line", xi, (xi - params.alpha) * params.sigma, "", ""});
        }
    }
    return rows;
}

void write_atlas_csv(std::ostream& os, const std::vector<AtlasRow>& rows) {
    os << kAtlasCsv << '\n' << "kind,x,y,region,outcome\n";
    for (const auto& r : rows) {
        os << r.kind << ',' << format_number(r.x) << ',' << format_number(r.y) << ',' << r.region << ',' << r.outcome << '\n';
    }
}

}  // namespace fracheat::io

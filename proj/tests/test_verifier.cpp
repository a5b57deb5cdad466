#include <cmath>
#include <random>

#include "doctest.h"
#include "fracheat/constructions.hpp"
#include "fracheat/errors.hpp"
#include "fracheat/sharp_bounds.hpp"
#include "fracheat/verifier.hpp"

using namespace fracheat;

namespace {

ProblemParams s2() {
    ProblemParams p;
    p.n = 1;
    p.lambda = 0.5;
    p.sigma = 0.5;
    p.alpha = 1.0;
    p.beta = 1.0;
    return p;
}

ProblemParams random_subcritical(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ul(0.1, 3.0), ua(0.1, 2.5), uk(0.3, 3.0);
    ProblemParams p;
    p.n = 1 + static_cast<int>(rng() % 3);
    do {
        p.lambda = ul(rng);
        p.sigma = ul(rng);
    } while (p.lambda * p.sigma > 0.9);
    p.alpha = ua(rng);
    p.beta = ua(rng);
    p.K1 = uk(rng);
    p.K2 = uk(rng);
    return p;
}

SampleConfig quiet() {
    SampleConfig sc;
    sc.keep_records = false;
    return sc;
}

}  // namespace

TEST_CASE("sampling lattice") {
    SampleConfig sc;
    const auto ts = sc.times(2.0);
    REQUIRE(ts.size() == 32);
    CHECK(ts.front() == doctest::Approx(2e-3).epsilon(1e-14));
    CHECK(ts.back() == 2.0);
    for (std::size_t i = 1; i < ts.size(); ++i) CHECK(ts[i] > ts[i - 1]);
    const auto rs = sc.radii(4.0);
    REQUIRE(rs.size() == 17);
    CHECK(rs.front() == 0.0);
    CHECK(rs.back() == doctest::Approx(8.0).epsilon(1e-15));
    sc.time_samples = 0;
    CHECK_THROWS_AS(sc.validate(), DomainError);
    CHECK(exit_code(Verdict::Certified) == 0);
    CHECK(exit_code(Verdict::Violated) == 1);
    CHECK(exit_code(Verdict::Inconclusive) == 3);
    CHECK(to_string(Verdict::Inconclusive) == "inconclusive");
}

TEST_CASE("exact pair saturates both inequalities") {
    const auto r = check_system(exact_solution_pair(s2()), s2());
    CHECK(r.verdict == Verdict::Certified);
    CHECK(std::abs(r.max_ratio_f - 1.0) <= 1e-9);
    CHECK(std::abs(r.max_ratio_g - 1.0) <= 1e-9);
    CHECK(r.samples == 32 * 17);
    for (const auto& rec : r.records) {
        CHECK(std::abs(rec.ratio_f - 1.0) <= 1e-9);
        CHECK(std::abs(rec.ratio_g - 1.0) <= 1e-9);
    }

    std::mt19937_64 rng(21);
    for (int k = 0; k < 25; ++k) {
        const auto P = random_subcritical(rng);
        auto sc = quiet();
        sc.radial_shells = 2;
        const auto rr = check_system(exact_solution_pair(P), P, sc);
        INFO("lambda=" << P.lambda << " sigma=" << P.sigma);
        CHECK(rr.verdict == Verdict::Certified);
        CHECK(std::abs(rr.max_ratio_f - 1.0) <= 1e-8);
        CHECK(std::abs(rr.max_ratio_g - 1.0) <= 1e-8);
    }
}

TEST_CASE("trivial and violated pairs") {
    const auto P = s2();
    const auto zero = check_system(zero_pair(), P);
    CHECK(zero.verdict == Verdict::Certified);
    CHECK(zero.max_ratio_f == 0.0);
    CHECK(zero.max_ratio_g == 0.0);

    // Doubling f scales ratio_f by 2 and ratio_g by 2^s.
    auto doubled = exact_solution_pair(P);
    doubled.f.amplitude *= 2.0;
    const auto r = check_system(doubled, P);
    CHECK(r.verdict == Verdict::Violated);
    REQUIRE(r.violation.has_value());
    CHECK(r.violation->which == "f");
    CHECK(r.max_ratio_f == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(r.max_ratio_g == doctest::Approx(std::pow(2.0, -P.sigma)).epsilon(1e-9));

    // Positive over zero.
    SolutionPair lone;
    lone.f = SpaceTimeFunction::separable(Constant1{}, TimeProfile::indicator(0.0, 2.0));
    const auto rl = check_system(lone, P);
    CHECK(rl.verdict == Verdict::Violated);
    CHECK(std::isinf(rl.max_ratio_f));

    // Support in t < 0.
    auto early = exact_solution_pair(P);
    early.f = SpaceTimeFunction::separable(Constant1{}, TimeProfile::indicator(-1.0, 2.0, 1e-3));
    const auto re = check_system(early, P);
    CHECK(re.verdict == Verdict::Violated);
    CHECK(!re.initial_support_ok);

    // Negative values.
    auto neg = exact_solution_pair(P);
    neg.g.amplitude = -1.0;
    const auto rn = check_system(neg, P);
    CHECK(rn.verdict == Verdict::Violated);
    CHECK(!rn.nonnegative_ok);
}

TEST_CASE("determinism and refinement") {
    const auto P = s2();
    const auto c = sharp_constants(P);
    const auto pair = mollified_pair(P, 0.8 * c.M1, 0.6 * c.M2).pair;
    SampleConfig a;
    a.threads = 1;
    a.time_samples = 12;
    a.radial_shells = 6;
    SampleConfig b = a;
    b.threads = 4;
    const auto ra = check_system(pair, P, a);
    const auto rb = check_system(pair, P, b);
    CHECK(ra.records == rb.records);
    CHECK(ra.max_ratio_f == rb.max_ratio_f);
    CHECK(ra.argmax_f_t == rb.argmax_f_t);
    CHECK(ra.verdict == rb.verdict);
    CHECK(check_system(pair, P, a).records == ra.records);

    // Denser lattices never flip the exact pair.
    for (int m : {8, 32, 64}) {
        SampleConfig d = quiet();
        d.time_samples = m;
        d.radial_shells = m / 4 + 1;
        CHECK(check_system(exact_solution_pair(P), P, d).verdict == Verdict::Certified);
    }
}

TEST_CASE("envelope margins") {
    const auto P = s2();
    const auto e = envelope_check(exact_solution_pair(P), P);
    REQUIRE(e.rows.size() == 8);
    CHECK(e.margin_f == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.margin_g == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.margin_u == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(e.margin_v == doctest::Approx(1.0).epsilon(1e-10));

    const auto c = sharp_constants(P);
    const auto mol = mollified_pair(P, 0.5 * c.M1, 0.5 * c.M2);
    const auto em = envelope_check(mol.pair, P, {0.05, 0.3, 1.0});
    CHECK(em.margin_f == doctest::Approx(std::pow(0.5, c.kappa)).epsilon(1e-12));
    CHECK(em.margin_g == doctest::Approx(std::pow(0.5, c.kappa)).epsilon(1e-12));
    CHECK(em.margin_u <= 1.0);
    CHECK(em.margin_v <= 1.0);

    // Any certified pair stays below the envelopes.
    auto Q = P;
    Q.K1 = 1.8;
    const auto par = paraboloid_pair(Q);
    const auto ep = envelope_check(par.pair, Q, {0.1, 1.0, 10.0});
    CHECK(ep.margin_f <= 1.0 + 1e-8);
    CHECK(ep.margin_g <= 1.0 + 1e-8);
    CHECK(ep.margin_u <= 1.0 + 1e-8);
    CHECK(ep.margin_v <= 1.0 + 1e-8);

    auto sup = P;
    sup.lambda = 3.0;
    CHECK_THROWS_AS((void)envelope_check(zero_pair(), sup), DomainError);
}

TEST_CASE("picard iteration") {
    const auto P = s2();
    // Fixed point.
    const auto fp = picard_iterate(P, exact_solution_pair(P), 10, 1.0);
    REQUIRE(fp.trace.size() == 11);
    for (const auto& st : fp.trace) {
        CHECK(std::abs(st.ratio_envelope_f - 1.0) <= 1e-10);
        CHECK(std::abs(st.ratio_envelope_g - 1.0) <= 1e-10);
    }
    CHECK(!fp.blowup_evidence);
    CHECK(fp.iterates.size() == 11);

    // Zero stays zero.
    const auto z = picard_iterate(P, zero_pair(), 3, 1.0);
    for (const auto& st : z.trace) {
        CHECK(st.sup_f == 0.0);
        CHECK(st.sup_g == 0.0);
    }

    // From twice the envelope, log distances to the fixed point contract by
    // lambda sigma over each pair of steps.
    auto seed = exact_solution_pair(P);
    seed.f.amplitude *= 2.0;
    seed.g.amplitude *= 2.0;
    const auto c = sharp_constants(P);
    const auto up = picard_iterate(P, seed, 10, 1.0);
    for (std::size_t k = 0; k + 2 < up.trace.size(); ++k) {
        const double d0 = std::abs(std::log(up.trace[k].coef_f / c.f_coef));
        const double d2 = std::abs(std::log(up.trace[k + 2].coef_f / c.f_coef));
        CHECK(d2 <= (P.lambda * P.sigma + 1e-9) * d0);
        CHECK(up.trace[k + 1].sup_f <= up.trace[k].sup_f);
    }

    // Region B with a strongly convex profile and unequal K.
    ProblemParams B;
    B.lambda = 2.0;
    B.sigma = 0.4;
    B.K1 = 1.5;
    const auto rb = picard_iterate(B, exact_solution_pair(B), 6, 2.0);
    for (const auto& st : rb.trace) {
        CHECK(st.ratio_envelope_f <= 1.0 + 1e-8);
        CHECK(st.ratio_envelope_g <= 1.0 + 1e-8);
    }

    // Spatially varying seed: after the first iterate the trace stays below the envelope.
    const auto mol = mollified_pair(P, 0.7 * c.M1, 0.7 * c.M2).pair;
    PicardConfig cfg;
    cfg.time_nodes = 16;
    cfg.shells = 5;
    const auto rm = picard_iterate(P, mol, 3, 1.0, cfg);
    for (std::size_t k = 1; k < rm.trace.size(); ++k) {
        CHECK(rm.trace[k].ratio_envelope_f <= 1.0 + 1e-6);
        CHECK(rm.trace[k].ratio_envelope_g <= 1.0 + 1e-6);
    }

    // Supercritical growth is flagged.
    ProblemParams S;
    S.lambda = 2.0;
    S.sigma = 2.0;
    SolutionPair big;
    big.f = SpaceTimeFunction::separable(Constant1{}, TimeProfile::power(50.0, 0.0));
    big.g = big.f;
    PicardConfig small;
    small.time_nodes = 8;
    const auto rs = picard_iterate(S, big, 12, 5.0, small);
    CHECK(rs.blowup_evidence);
}

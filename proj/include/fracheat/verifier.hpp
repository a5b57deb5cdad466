#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracheat/constructions.hpp"
#include "fracheat/params.hpp"
#include "fracheat/potential.hpp"

namespace fracheat {

/// Worker count: requested if > 0, else FRACHEAT_THREADS, else the hardware count.
[[nodiscard]] int resolve_threads(int requested);

struct SampleConfig {
    int time_samples = 32;
    int radial_shells = 17;
    /// Times are log-spaced on [t_min_fraction * H, H], H = horizon or pair.horizon.
    double t_min_fraction = 1e-3;
    /// Radii are equispaced on [0, radius_factor * sqrt(H)].
    double radius_factor = 4.0;
    std::optional<double> horizon;
    /// Certified requires both ratios <= 1 + tol.
    double tol = 1e-8;
    int threads = 0;
    /// Keep per-sample records in the report.
    bool keep_records = true;

    void validate() const;
    [[nodiscard]] std::vector<double> times(double H) const;
    [[nodiscard]] std::vector<double> radii(double H) const;
};

enum class Verdict { Certified, Violated, Inconclusive };

[[nodiscard]] std::string_view to_string(Verdict v);
/// Exit code convention of the command-line tool: 0, 1, 3.
[[nodiscard]] int exit_code(Verdict v);

struct SampleRecord {
    double t = 0.0;
    double x = 0.0;
    double f = 0.0;
    double g = 0.0;
    double j_alpha_f = 0.0;
    double j_beta_g = 0.0;
    /// f / (K1 (J_b g)^l) and g / (K2 (J_a f)^s); 0 when the numerator is 0,
    /// +infinity for positive over zero.
    double ratio_f = 0.0;
    double ratio_g = 0.0;
    bool failed = false;

    bool operator==(const SampleRecord&) const = default;
};

struct Violation {
    /// "f", "g", "support" or "sign".
    std::string which;
    double t = 0.0;
    double x = 0.0;
    double value = 0.0;

    bool operator==(const Violation&) const = default;
};

struct VerificationReport {
    double max_ratio_f = 0.0;
    double max_ratio_g = 0.0;
    double argmax_f_t = 0.0;
    double argmax_f_x = 0.0;
    double argmax_g_t = 0.0;
    double argmax_g_x = 0.0;
    bool initial_support_ok = true;
    bool nonnegative_ok = true;
    std::size_t samples = 0;
    std::size_t failed_samples = 0;
    double horizon = 0.0;
    SampleConfig sampling;
    QuadratureConfig quadrature;
    Verdict verdict = Verdict::Inconclusive;
    std::optional<Violation> violation;
    std::string message;
    std::vector<SampleRecord> records;
};

/// Evaluate 0 <= f <= K1 (J_b g)^l and 0 <= g <= K2 (J_a f)^s on the sample
/// lattice, and f = g = 0 at the mirrored negative times. Quadrature failures
/// make the verdict inconclusive unless a violation was found elsewhere.
[[nodiscard]] VerificationReport check_system(const SolutionPair& pair, const ProblemParams& params,
                                              const SampleConfig& sampling = {},
                                              const QuadratureConfig& quadrature = {});

struct EnvelopeRow {
    double T = 0.0;
    double sup_f = 0.0;
    double sup_g = 0.0;
    double envelope_f = 0.0;
    double envelope_g = 0.0;
    /// J_a f(0, T) and J_b g(0, T) against the u and v envelopes.
    double u0 = 0.0;
    double v0 = 0.0;
    double envelope_u = 0.0;
    double envelope_v = 0.0;
};

struct EnvelopeReport {
    std::vector<EnvelopeRow> rows;
    /// Worst sampled sup / envelope over the ladder.
    double margin_f = 0.0;
    double margin_g = 0.0;
    double margin_u = 0.0;
    double margin_v = 0.0;
};

/// Sampled sup of f and g on (0, T] against the sharp envelopes for a ladder
/// of T (default: 8 values log-spaced up to the pair horizon). Requires lambda sigma < 1.
[[nodiscard]] EnvelopeReport envelope_check(const SolutionPair& pair, const ProblemParams& params,
                                            std::vector<double> ladder = {},
                                            const SampleConfig& sampling = {},
                                            const QuadratureConfig& quadrature = {});

struct PicardConfig {
    /// Positive time nodes, log-spaced on [t_min_fraction T, T]; t = 0 is always a node.
    int time_nodes = 48;
    double t_min_fraction = 1e-3;
    /// Radial shells of width radius_factor sqrt(T) / (shells - 1); the last is
    /// unbounded. Spatially constant seeds use a single shell.
    int shells = 9;
    double radius_factor = 4.0;
    int threads = 0;
    /// Values above this count as blow-up evidence.
    double overflow = 1e300;
};

struct PicardStep {
    int k = 0;
    double sup_f = 0.0;
    double sup_g = 0.0;
    /// sup / T^{gamma}, the coefficients the delta map acts on (lambda sigma < 1).
    double coef_f = 0.0;
    double coef_g = 0.0;
    /// sup / envelope(T) when lambda sigma < 1, else 0.
    double ratio_envelope_f = 0.0;
    double ratio_envelope_g = 0.0;
};

struct PicardResult {
    std::vector<PicardStep> trace;
    /// Iterates on the grid; entry k is (f_k, g_k), entry 0 the seed.
    std::vector<SolutionPair> iterates;
    bool blowup_evidence = false;
    double T = 0.0;
};

/// f_{k+1} = K1 (J_b g_k)^l, g_{k+1} = K2 (J_a f_k)^s on a fixed grid.
[[nodiscard]] PicardResult picard_iterate(const ProblemParams& params, const SolutionPair& seed,
                                          int steps, double T, const PicardConfig& config = {},
                                          const QuadratureConfig& quadrature = {});

}  // namespace fracheat

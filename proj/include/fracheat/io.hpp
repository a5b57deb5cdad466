#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fracheat/constructions.hpp"
#include "fracheat/params.hpp"
#include "fracheat/potential.hpp"
#include "fracheat/sharp_bounds.hpp"
#include "fracheat/verifier.hpp"

namespace fracheat::io {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kSolutionSchema = "fracheat.solution/1";
inline constexpr std::string_view kReportSchema = "fracheat.report/1";
inline constexpr std::string_view kErrorSchema = "fracheat.error/1";

/// Thrown on malformed documents.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Finite values as numbers; infinities and NaN as "inf", "-inf", "nan".
[[nodiscard]] Json number(double v);
[[nodiscard]] double to_double(const Json& j);
/// Shortest text that reads back to the same double; "inf", "-inf", "nan" otherwise.
[[nodiscard]] std::string format_number(double v);

[[nodiscard]] Json encode(const ProblemParams& p);
[[nodiscard]] ProblemParams decode_params(const Json& j);
[[nodiscard]] Json encode(const QuadratureConfig& c);
[[nodiscard]] QuadratureConfig decode_quadrature(const Json& j);
[[nodiscard]] Json encode(const SampleConfig& c);
[[nodiscard]] SampleConfig decode_sampling(const Json& j);
[[nodiscard]] Json encode(const PicardConfig& c);
[[nodiscard]] PicardConfig decode_picard(const Json& j);
[[nodiscard]] Json encode(const BlowupOptions& o);

[[nodiscard]] Json encode(const TimeProfile& tp);
[[nodiscard]] TimeProfile decode_time_profile(const Json& j);
[[nodiscard]] Json encode(const RadialProfile& rp);
[[nodiscard]] RadialProfile decode_radial(const Json& j);
[[nodiscard]] Json encode(const SpaceTimeFunction& fn);
[[nodiscard]] SpaceTimeFunction decode_function(const Json& j);
[[nodiscard]] Json encode(const SolutionPair& pair);
[[nodiscard]] SolutionPair decode_pair(const Json& j);

[[nodiscard]] Json encode(const RegimeReport& r);
[[nodiscard]] Json encode(const SharpConstants& c);
[[nodiscard]] Json encode(const DeltaIteration& d);
[[nodiscard]] Json encode(const MollifiedPairSpec& s);
[[nodiscard]] Json encode(const BlowupFamilySpec& s);
[[nodiscard]] Json encode(const LpNormResult& r);
[[nodiscard]] Json encode(const XiEtaGeometry& g);
[[nodiscard]] Json encode(const P1Choice& c);
[[nodiscard]] Json encode(const P4Point& p);
[[nodiscard]] Json encode(const BlowupExponents& b);
/// Records are included when the report kept them.
[[nodiscard]] Json encode(const VerificationReport& r);
[[nodiscard]] Json encode(const EnvelopeReport& r);
/// The sup-norm trace; iterates are not written.
[[nodiscard]] Json encode(const PicardResult& r);

/// A solution pair with the parameters it was built for, the construction
/// details and the resolved configuration.
struct SolutionDocument {
    ProblemParams params;
    SolutionPair pair;
    std::string construction;
    Json details = Json::object();
    Json config = Json::object();
};

[[nodiscard]] Json encode(const SolutionDocument& doc);
[[nodiscard]] SolutionDocument decode_solution(const Json& j);

/// {"schema": kReportSchema, "command": ..., "config": ..., "result": ...}.
[[nodiscard]] Json report_document(std::string_view command, Json config, Json result);
[[nodiscard]] Json error_document(std::string_view type, std::string_view message, int exit_code);

/// Read a document from a path, or stdin for "-".
[[nodiscard]] Json read_json(const std::string& path);
/// Write to a path, or stdout for "" and "-".
void write_text(const std::string& path, const std::string& text);

// CSV outputs. Each starts with a "# fracheat.<kind>/<version>" line followed
// by a fixed header row.
inline constexpr std::string_view kSamplesCsv = "# fracheat.samples/1";
inline constexpr std::string_view kPicardCsv = "# fracheat.picard/1";
inline constexpr std::string_view kEnvelopeCsv = "# fracheat.envelope/1";
inline constexpr std::string_view kAtlasCsv = "# fracheat.atlas/1";
inline constexpr std::string_view kPotentialCsv = "# fracheat.potential/1";

void write_samples_csv(std::ostream& os, const VerificationReport& r);
void write_picard_csv(std::ostream& os, const PicardResult& r);
void write_envelope_csv(std::ostream& os, const EnvelopeReport& r);

struct AtlasConfig {
    double lambda_max = 5.0;
    double sigma_max = 5.0;
    int lambda_cells = 200;
    int sigma_cells = 200;
    /// Samples per curve trace.
    int curve_samples = 200;
    /// Also emit the two lines of the (xi, eta) plane for the given (lambda, sigma).
    bool xi_eta = false;

    void validate() const;
};

struct AtlasRow {
    /// "cell", "mu", "nu", "critical", "xi_line", "eta_line".
    std::string kind;
    double x = 0.0;
    double y = 0.0;
    std::string region;
    std::string outcome;
};

/// Cells (lambda_i, sigma_j) on the grid over (0, lambda_max] x (0, sigma_max]
/// classified as given, followed by the mu and nu traces and the critical point.
/// The (lambda, sigma) of params only matter for the xi-eta lines.
[[nodiscard]] std::vector<AtlasRow> atlas(const ProblemParams& params, const AtlasConfig& cfg);
void write_atlas_csv(std::ostream& os, const std::vector<AtlasRow>& rows);

}  // namespace fracheat::io

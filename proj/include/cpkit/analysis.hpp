#pragma once

#include "cpkit/gallery.hpp"
#include "cpkit/json_io.hpp"
#include "cpkit/tolerances.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cpkit {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

// Check names in pipeline order.
const std::vector<std::string>& all_checks();

struct AnalysisRequest {
    std::string source;             // "gallery:<name>" or a path to a subspace JSON file
    ParamMap params;                // gallery parameters
    std::optional<json> semigroup;  // overrides the case or file semigroup
    std::optional<CMatrix> unitary;  // replaces sampled and case unitaries
    std::vector<std::string> checks;  // empty or {"all"}: every check
    Tolerances tol;
    std::map<std::string, double> tolOverrides;  // echoed in the report; already applied to tol
    std::uint64_t seed = 1;
    std::string format = "json";  // "json" or "text"
    int samples = 0;              // 0: the case default
};

struct AnalysisReport {
    json body;
    // True iff no requested check failed operationally; verdicts and skips do not count.
    bool ok() const;
    std::string render(const std::string& format) const;
};

// Expands "all", validates names and adds dependencies (dynmap needs consistency).
// Throws ParseError on unknown names.
std::vector<std::string> resolve_checks(const std::vector<std::string>& requested);

// Parse, validation and unknown-name problems throw (ParseError, DomainError, DimensionError);
// everything after the subspace is built is recorded per check.
AnalysisReport run_analyze(const AnalysisRequest& request);
AnalysisReport run_gallery(const std::string& name, const ParamMap& params, std::uint64_t seed, int samples = 0,
                           const std::vector<std::string>& checks = {});
AnalysisReport analyze_case(const GalleryCase& c, const AnalysisRequest& request);

// Structural check of a report against the version-1 schema; returns the problems found.
std::vector<std::string> validate_report(const json& report);

std::string render_text(const json& report);

}  // namespace cpkit

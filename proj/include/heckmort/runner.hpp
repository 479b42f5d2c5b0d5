#pragma once

#include <string>
#include <vector>

#include "heckmort/dsl.hpp"
#include "heckmort/qseries.hpp"

namespace heckmort {

struct RunConfig {
    Exponent order = Exponent(60);

    enum class Format { Text, Json };
    Format format = Format::Text;

    /// Number of equations verified concurrently; at least 1. Reports keep
    /// input order, so the width never changes the output.
    int jobs = 1;

    /// Empty selects SeriesCache::default_directory().
    std::string cache_dir;
    bool use_cache = true;

    int verbosity = 0;
};

/// Throws std::invalid_argument unless cfg.order > 0 and cfg.jobs >= 1.
void validate(const RunConfig& cfg);

struct EquationReport {
    std::string identity;  // canonical print of the equation
    VerificationReport report;
};

/// Verifies one parsed equation, consulting the series cache per side.
EquationReport verify_equation(const Equation& eq, const RunConfig& cfg);

/// Parses every nonblank, noncomment line up front (a ParseError carries the
/// offending input line number), then verifies the equations cfg.jobs at a
/// time. Engine failures abort the run: the earliest failing equation's
/// error is rethrown after all workers finish.
std::vector<EquationReport> run_verify_lines(const std::vector<std::string>& lines,
                                             const RunConfig& cfg);
std::vector<EquationReport> run_verify_text(const std::string& text, const RunConfig& cfg);
std::vector<EquationReport> run_verify_file(const std::string& path, const RunConfig& cfg);

bool all_verified(const std::vector<EquationReport>& reports);

std::string report_to_text(const EquationReport& r);

/// JSON array of {identity, status, checked_order: [num, den],
/// first_mismatch: {exponent: [num, den], lhs, rhs} | null, elapsed_ms},
/// keys sorted, two-space indent.
std::string reports_to_json(const std::vector<EquationReport>& reports);

}  // namespace heckmort

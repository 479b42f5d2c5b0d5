#pragma once

#include <string>
#include <vector>

namespace heckmort {

struct AcceptanceResult {
    std::string name;
    bool passed = false;
    double elapsed_ms = 0.0;
    double limit_ms = 0.0;
    std::string detail;
};

/// Runs the full release gate: twelve checks covering the identity catalog,
/// the master formula across its parameter sweep, the derivation replay, and
/// the randomized property suites. Exact rational comparison throughout; each
/// check also enforces its wall-clock budget. Never throws — a check that
/// raises is recorded as failed with the message in `detail`.
std::vector<AcceptanceResult> run_acceptance();

/// One line per result: "PASS <name> (<elapsed> ms) <detail>" or "FAIL ...".
std::string format_result(const AcceptanceResult& r);

}  // namespace heckmort

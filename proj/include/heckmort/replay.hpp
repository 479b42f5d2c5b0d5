#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "heckmort/master.hpp"
#include "heckmort/qseries.hpp"

namespace heckmort {

/// One summand attached to a lattice point by an enumeration callback.
/// The q-exponent is an integer multiple of 1/scale and excludes the
/// exponent carried by the x/y powers; those powers apply to the
/// specialized (-x) and (-y). The weight is counted in half units so the
/// sign-splitting rewrites can contribute exact halves.
struct LatticeTerm {
    std::int64_t exp_scaled;
    std::int64_t xpow;
    std::int64_t ypow;
    int weight2;
};

/// A multi-index sum described pointwise: for each point of the integer
/// box the callback appends the summands living there. The enumerator
/// folds in the specialization's own exponents and coefficients.
struct LatticeSum {
    int dims = 3;
    std::int64_t scale = 1;  // common denominator of every emitted exponent
    SignedMonomial x{Coeff(1), Exponent(1)};
    SignedMonomial y{Coeff(1), Exponent(1)};
    Exponent precision = Exponent(0);
    std::function<void(const std::int64_t*, std::vector<LatticeTerm>&)> terms;
};

/// Reference enumeration over the box [-radius, radius]^dims, dropping
/// exponents at or above the horizon. Kept as the behavioral baseline the
/// parallel kernel is tested against.
QSeries lattice_box_sum_serial(const LatticeSum& sum, std::int64_t radius);

/// Same contract with the leading index split across OpenMP threads;
/// per-thread partial series are merged afterwards. Falls back to the
/// serial walk when built without OpenMP.
QSeries lattice_box_sum_parallel(const LatticeSum& sum, std::int64_t radius);

/// Enumerates at doubled radii until two consecutive rounds produce the
/// same series below the horizon, then returns the stabilized value.
/// Throws NonterminatingEnumeration when the radius cap is reached first,
/// as happens outside the convergence windows.
QSeries lattice_box_sum(const LatticeSum& sum, std::int64_t initial_radius = 8,
                        std::int64_t max_radius = 1024);

/// One rewrite step of the replayed derivation: a label describing the
/// step plus the coefficient comparison between its two sides.
struct ReplayStage {
    std::string label;
    VerificationReport report;
};

/// Replays the odd-n derivation of the master identity at a monomial
/// specialization. Both sides are multiplied by Jbar_{0,np(2n+p)} and
/// every displayed multiple sum along the rewrite chain is enumerated
/// independently; each consecutive pair is compared coefficientwise below
/// the horizon, and the final stage checks that the assembled left side
/// equals the assembled right side. Requires odd n (domain_error) and a
/// specialization inside every convergence window (WindowViolation before
/// any series work).
std::vector<ReplayStage> replay_proof(const MasterParams& mp, const Specialization& spec,
                                      Exponent precision);

}  // namespace heckmort

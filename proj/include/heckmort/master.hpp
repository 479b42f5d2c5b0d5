#pragma once

#include <cstdint>
#include <vector>

#include "heckmort/hecke.hpp"
#include "heckmort/qseries.hpp"
#include "heckmort/theta.hpp"

namespace heckmort {

/// Coprime positive parameter pair (n, p) selecting the shape
/// (a, b, c) = (n, n+p, n), whose discriminant b^2 - ac = p(2n+p) is positive.
struct MasterParams {
    std::int64_t n;
    std::int64_t p;

    /// p(2n+p); validates the parameter invariants.
    std::int64_t discriminant() const;
};

/// Exact monomial values substituted for the two free variables.
struct Specialization {
    SignedMonomial x;
    SignedMonomial y;
};

/// One summand of the p x p theta-quotient correction term:
///   prefactor * j(num_ratio) * j(num_product) / (j(den_y_over_x) * j(den_x_over_y)),
/// to be multiplied by the shared factor J^3_{p^2(2n+p)} / Jbar_{0,np(2n+p)}.
struct ThetaQuotientTerm {
    SignedMonomial prefactor;
    ThetaSpec num_ratio;
    ThetaSpec num_product;
    ThetaSpec den_y_over_x;
    ThetaSpec den_x_over_y;
};

/// The p^2 summands of theta_np at a specialization, in row-major (r*, s*)
/// grid order. Pure bookkeeping: no series are expanded and no genericity
/// check runs, so the terms can be inspected for specializations where the
/// quotient itself is undefined.
std::vector<ThetaQuotientTerm> theta_np_terms(const MasterParams& mp, const Specialization& spec);

/// The theta-quotient correction term: the sum of the p^2 grid summands times
/// J^3_{p^2(2n+p)} / Jbar_{0,np(2n+p)}. Throws NonGenericSpecialization when
/// any denominator theta vanishes identically at the specialization.
QSeries theta_np(const MasterParams& mp, const Specialization& spec, Exponent precision);

/// The two-part Appell--Lerch assembly
///   sum_{t=0}^{a-1} (-y)^t q^{c C(t,2)} j(q^{bt} x; q^a)
///                   m(-q^{a C(b+1,2) - c C(a+1,2) - t(b^2-ac)} (-y)^a / (-x)^b, q^{a(b^2-ac)}, -1)
/// plus the same with (a, x) and (c, y) exchanged. Requires positive a, c and
/// b^2 - ac > 0.
QSeries g_abc(const HeckeParams& params, const SignedMonomial& x, const SignedMonomial& y,
              Exponent precision);

/// Compares f_{n,n+p,n}(x,y) against g_{n,n+p,n}(x,y) + theta_np(x,y). Does
/// not require the convergence windows: the double sum and the assembly are
/// entire in q below the horizon.
VerificationReport verify_master(const MasterParams& mp, const Specialization& spec,
                                 Exponent precision);

/// q-order window checks for one ordering of the variables, writing
/// W = q_order(x^{-n} y^{n+p}).
struct WindowSide {
    /// -p(n+p)/2 < W < p(3n+p)/2
    bool hypothesis = false;
    /// r in [0, p): 0 < p(n+p)/2 + p(2n+p) r + W < p^2(2n+p)
    std::vector<bool> theta_windows;
    /// k in [0, n), L = n(np + C(p+1,2)), M = np(2n+p):
    ///   k <= floor(n/2):  0 < L - p(2n+p) k - W < M
    ///   k >  floor(n/2):  0 < L + M - p(2n+p) k - W < M
    std::vector<bool> appell_windows;

    bool all() const;
};

/// Window checks for both variable orderings.
struct WindowReport {
    WindowSide direct;   // W from x^{-n} y^{n+p}
    WindowSide swapped;  // W from y^{-n} x^{n+p}

    bool all() const { return direct.all() && swapped.all(); }
};

WindowReport check_windows(const MasterParams& mp, const Specialization& spec);

/// Counterexample location for the sign-identity check: `which` selects the
/// identity (1 or 2), `r` the free outer index, and lhs/rhs are the two sign
/// values that disagree.
struct SignIdentityCase {
    int which = 0;
    std::int64_t r = 0;
    std::int64_t k = 0;
    std::int64_t w = 0;
    int lhs = 0;
    int rhs = 0;
};

/// Exhaustively checks, for all |r|, |w| <= bound and 0 <= k <= n-1, the
/// identities
///   sg(nr + k + nw + floor(n/2))     == -sg(-w-1-r)  if k + floor(n/2) <= n-1,
///                                       -sg(-w-2-r)  otherwise;
///   sg(nr + k - nw - floor(n/2) - 1) == -sg(w-r)     if k <= floor(n/2),
///                                       -sg(w-1-r)   otherwise.
/// For odd n both case splits coincide at k <= (n-1)/2; for even n they lie
/// one column apart (the boundary column belongs to different branches in the
/// two identities). `perturb` shifts the floor(n/2) offset and exists so
/// tests can confirm a broken identity is reported; counterexample details
/// land in `witness`.
VerificationReport lemma_sign_ids(std::int64_t n, std::int64_t bound, std::int64_t perturb = 0,
                                  SignIdentityCase* witness = nullptr);

}  // namespace heckmort

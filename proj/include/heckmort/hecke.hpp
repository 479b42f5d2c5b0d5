#pragma once

#include "heckmort/qseries.hpp"

namespace heckmort {

/// sign weight: +1 for r >= 0, -1 for r < 0.
constexpr int sg(std::int64_t r) { return r >= 0 ? 1 : -1; }

/// (sg(r) + sg(s)) / 2: +1 / -1 on the same-sign quadrants, 0 on mixed pairs.
constexpr int sg2(std::int64_t r, std::int64_t s) { return (sg(r) + sg(s)) / 2; }

struct HeckeParams {
    std::int64_t a;
    std::int64_t b;
    std::int64_t c;

    std::int64_t discriminant() const {
        return Rat64::checked_mul(b, b) - Rat64::checked_mul(a, c);
    }
};

/// The indefinite double sum
///   f_{a,b,c}(x,y) = sum_{sg(r)=sg(s)} sg(r) (-x)^r (-y)^s q^{a C(r,2) + b r s + c C(s,2)}
/// for positive a, b, c, evaluated by certified outward scans over the two
/// same-sign quadrants.
QSeries f_abc(const HeckeParams& params, const SignedMonomial& x, const SignedMonomial& y,
              Exponent precision);

/// sum_{r,s} sg2(r,s) q^{rs} x^r y^s on the windows 0 < q_order(x) < 1,
/// 0 < q_order(y) < 1.
QSeries onepsi_corollary_lhs(const SignedMonomial& x, const SignedMonomial& y, Exponent precision);

/// Bilateral summation check: compares
///   sum_n (a;q)_n / (b;q)_n x^n
/// with the closed product form
///   (b/a, q/(ax), ax, q)oo / (b, b/(ax), q/a, x)oo
/// on the q-order window q_order(b/a) > q_order(x) > 0.
VerificationReport onepsi_general(const SignedMonomial& a, const SignedMonomial& b,
                                  const SignedMonomial& x, Exponent precision);

}  // namespace heckmort

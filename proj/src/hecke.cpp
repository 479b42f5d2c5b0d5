#include "heckmort/hecke.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace heckmort {

namespace {

// Quadratic exponent form A i^2 + B ij + C j^2 + D i + E j + F over N x N.
struct QuadForm {
    Rat64 A, B, C, D, E, F;

    Exponent at(std::int64_t i, std::int64_t j) const {
        Rat64 I(i), J(j);
        return A * I * I + B * I * J + C * J * J + D * I + E * J + F;
    }
};

// Emits every (i,j) in N^2 with form value < horizon. Soundness relies on:
// rows are convex in j (C > 0) or strictly increasing (C = 0 with positive
// slope); for B > 0 the row vertex -(Bi+E)/2C drifts left and eventually
// clamps to j = 0, after which the row-minimum envelope is the single
// parabola A i^2 + D i + F, monotone beyond its own vertex. The loop stops
// only once the envelope is certified monotone and above the horizon.
void scan_quadrant(const QuadForm& q, Exponent horizon,
                   const std::function<void(std::int64_t, std::int64_t)>& emit) {
    if (q.B < Rat64(0)) throw std::domain_error("scan_quadrant: needs B >= 0");
    if (q.C < Rat64(0)) throw std::domain_error("scan_quadrant: needs C >= 0");

    auto row_min_at = [&](std::int64_t i) -> std::int64_t {
        if (q.C.is_zero()) {
            Rat64 slope = q.B * Rat64(i) + q.E;
            if (!(Rat64(0) < slope))
                throw EngineError(ErrorKind::WindowViolation,
                                  "scan_quadrant: row slope " + slope.str() + " not positive");
            return 0;
        }
        Rat64 v = -(q.B * Rat64(i) + q.E) / (q.C + q.C);
        std::int64_t f = std::max<std::int64_t>(v.floor(), 0);
        std::int64_t g = std::max<std::int64_t>(v.floor() + 1, 0);
        return q.at(i, f) <= q.at(i, g) ? f : g;
    };

    for (std::int64_t i = 0;; ++i) {
        std::int64_t j0 = row_min_at(i);
        if (q.at(i, j0) < horizon) {
            for (std::int64_t j = j0; j >= 0 && q.at(i, j) < horizon; --j) emit(i, j);
            for (std::int64_t j = j0 + 1; q.at(i, j) < horizon; ++j) emit(i, j);
            continue;
        }
        bool vertex_settled;
        if (q.C.is_zero() || q.B.is_zero()) {
            vertex_settled = true;  // j0 is the same for every later row
        } else {
            Rat64 v = -(q.B * Rat64(i) + q.E) / (q.C + q.C);
            vertex_settled = !(Rat64(0) < v);
        }
        if (!vertex_settled) continue;
        Rat64 lin = q.B * Rat64(j0) + q.D;
        if (q.A.is_zero()) {
            if (!(Rat64(0) < lin))
                throw EngineError(ErrorKind::WindowViolation,
                                  "scan_quadrant: envelope slope " + lin.str() + " not positive");
            break;
        }
        if (Rat64(i) >= -lin / (q.A + q.A)) break;
    }
}

}  // namespace

QSeries f_abc(const HeckeParams& p, const SignedMonomial& x, const SignedMonomial& y,
              Exponent precision) {
    if (p.a < 1 || p.b < 1 || p.c < 1)
        throw std::domain_error("f_abc: parameters must be positive integers");

    const Rat64 a(p.a), b(p.b), c(p.c);
    const Exponent ex = x.exp, ey = y.exp;
    const Coeff nx = -x.coeff, ny = -y.coeff;
    QSeries out(precision);

    // (+,+): r,s >= 0 with weight +1
    QuadForm pp{a / Rat64(2), b,          c / Rat64(2),
                ex - a / Rat64(2),        ey - c / Rat64(2), Rat64(0)};
    scan_quadrant(pp, precision, [&](std::int64_t r, std::int64_t s) {
        out.add_term(pp.at(r, s), coeff_pow(nx, r) * coeff_pow(ny, s));
    });

    // (-,-): r = -1-u, s = -1-v with weight -1
    QuadForm mm{a / Rat64(2),
                b,
                c / Rat64(2),
                Rat64(3) * a / Rat64(2) + b - ex,
                Rat64(3) * c / Rat64(2) + b - ey,
                a + b + c - ex - ey};
    scan_quadrant(mm, precision, [&](std::int64_t u, std::int64_t v) {
        out.add_term(mm.at(u, v), -coeff_pow(nx, -1 - u) * coeff_pow(ny, -1 - v));
    });

    return out;
}

QSeries onepsi_corollary_lhs(const SignedMonomial& x, const SignedMonomial& y, Exponent precision) {
    auto in01 = [](const Exponent& e) { return Exponent(0) < e && e < Exponent(1); };
    if (!in01(x.exp) || !in01(y.exp))
        throw EngineError(ErrorKind::WindowViolation,
                          "onepsi_corollary_lhs: q-orders (" + x.exp.str() + ", " + y.exp.str() +
                              ") outside (0,1) x (0,1)");

    QSeries out(precision);
    QuadForm pp{Rat64(0), Rat64(1), Rat64(0), x.exp, y.exp, Rat64(0)};
    scan_quadrant(pp, precision, [&](std::int64_t r, std::int64_t s) {
        out.add_term(pp.at(r, s), coeff_pow(x.coeff, r) * coeff_pow(y.coeff, s));
    });
    QuadForm mm{Rat64(0), Rat64(1),          Rat64(0),
                Rat64(1) - x.exp,            Rat64(1) - y.exp,
                Rat64(1) - x.exp - y.exp};
    scan_quadrant(mm, precision, [&](std::int64_t u, std::int64_t v) {
        out.add_term(mm.at(u, v), -coeff_pow(x.coeff, -1 - u) * coeff_pow(y.coeff, -1 - v));
    });
    return out;
}

namespace {

SignedMonomial q_shift(const SignedMonomial& m, std::int64_t k) {
    return SignedMonomial(m.coeff, m.exp + Exponent(k));
}

// (c; q)oo = prod_{k>=0} (1 - c q^k), exact truncation; the finitely many
// negative-order factors widen the working horizon as in the theta product.
QSeries poch_inf(const SignedMonomial& c, Exponent precision) {
    if (precision < Exponent(1)) return poch_inf(c, Exponent(1)).truncated(precision);
    Exponent drop(0);
    for (SignedMonomial m = c; m.exp < Exponent(0); m = q_shift(m, 1)) drop += -m.exp;
    Exponent w = precision + drop;
    QSeries acc = QSeries::constant(1, w);
    for (SignedMonomial m = c; m.exp < w; m = q_shift(m, 1))
        acc = mul(acc, QSeries::one_minus(m, w + drop));
    if (acc.precision() < precision)
        throw EngineError(ErrorKind::InsufficientPrecision, "poch_inf: horizon fell short");
    return acc.truncated(precision);
}

// 1 / (c; q)oo with every factor reciprocal expanded exactly.
QSeries inv_poch_inf(const SignedMonomial& c, Exponent precision) {
    return with_precision_target(precision, [&](Exponent w) {
        QSeries acc = QSeries::constant(1, w);
        for (SignedMonomial m = c; m.exp < w; m = q_shift(m, 1)) {
            if (m.exp == Exponent(0) && m.coeff == 1)
                throw EngineError(ErrorKind::PoleAtSpecialization,
                                  "inv_poch_inf: factor 1 - " + m.str() + " vanishes");
            acc = mul(acc, expand_reciprocal_one_minus(m, w));
        }
        return acc;
    });
}

// sum_{t >= emit_from} term_t where term_0 = 1 and
//   term_t = term_{t-1} * (1 - bin(t)) / (1 - den(t)) * step.
// Stage t gains at least d(t) = min(0, ord bin(t)) + max(0, -ord den(t)) +
// ord(step) in q-order, and past `settle` every d(t) is a fixed positive
// constant, so the tail past the stopping index sits above the horizon.
// Intermediate stages can dip below order zero before recovering; the
// suffix minima of the order bounds tell each stage how much horizon the
// rest of the chain still needs, which keeps every intermediate series to
// a span of at most w minus the deepest dip.
QSeries ratio_ladder_sum(const std::function<SignedMonomial(std::int64_t)>& bin,
                         const std::function<SignedMonomial(std::int64_t)>& den,
                         const SignedMonomial& step, std::int64_t emit_from, std::int64_t settle,
                         Exponent w) {
    std::vector<Exponent> bnd{Exponent(0)};
    for (std::int64_t t = 1;; ++t) {
        Exponent d = std::min(Exponent(0), bin(t).exp) +
                     std::max(Exponent(0), -den(t).exp) + step.exp;
        bnd.push_back(bnd.back() + d);
        if (t >= settle && !(bnd.back() < w)) break;
    }
    const std::int64_t last = static_cast<std::int64_t>(bnd.size()) - 2;
    std::vector<Exponent> need(last + 1, w);
    Exponent smin = bnd[last];
    for (std::int64_t t = last; t >= 0; --t) {
        smin = std::min(smin, bnd[t]);
        need[t] = w + bnd[t] - smin;
    }

    QSeries acc(w);
    QSeries term = QSeries::constant(1, need[0]);
    if (emit_from <= 0) acc = acc + term.truncated(w);
    for (std::int64_t t = 1; t <= last; ++t) {
        SignedMonomial bm = bin(t), dm = den(t);
        Exponent after_bin = bnd[t - 1] + std::min(Exponent(0), bm.exp);
        term = mul(term, QSeries::one_minus(bm, need[t - 1] - bnd[t - 1] + Exponent(2)));
        term = mul(term, expand_reciprocal_one_minus(dm, need[t] - step.exp - after_bin));
        term = term.mul_monomial(step);
        term = term.truncated(std::min(need[t], term.precision()));
        if (t >= emit_from) acc = acc + term.truncated(std::min(w, term.precision()));
    }
    return acc;
}

}  // namespace

VerificationReport onepsi_general(const SignedMonomial& a, const SignedMonomial& b,
                                  const SignedMonomial& x, Exponent precision) {
    if (!(Exponent(0) < x.exp) || !(x.exp < b.exp - a.exp))
        throw EngineError(ErrorKind::WindowViolation,
                          "onepsi_general: needs 0 < q_order(x) < q_order(b/a)");
    // denominator factors 1 - b q^j (j >= 0) and 1 - a q^{-j} (j >= 1) vanish
    // only when the shifted monomial is exactly 1
    if (b.coeff == 1 && b.exp.is_integer() && b.exp.num() <= 0)
        throw EngineError(ErrorKind::PoleAtSpecialization,
                          "onepsi_general: (b;q)_n has a vanishing factor");
    if (a.coeff == 1 && a.exp.is_integer() && a.exp.num() >= 1)
        throw EngineError(ErrorKind::PoleAtSpecialization,
                          "onepsi_general: (a;q)_{-n} has a vanishing factor");

    QSeries lhs = with_precision_target(precision, [&](Exponent w) {
        // n >= 0: stage n multiplies by (1 - a q^{n-1}) / (1 - b q^{n-1}) x
        QSeries pos = ratio_ladder_sum(
            [&](std::int64_t t) { return q_shift(a, t - 1); },
            [&](std::int64_t t) { return q_shift(b, t - 1); }, x, 0,
            std::max<std::int64_t>({(-a.exp).ceil(), (-b.exp).ceil(), 1}), w);
        // n = -k < 0: stage k multiplies by (1 - b q^{-k}) / (1 - a q^{-k}) x^{-1}
        QSeries neg = ratio_ladder_sum(
            [&](std::int64_t t) { return q_shift(b, -t); },
            [&](std::int64_t t) { return q_shift(a, -t); }, x.inverse(), 1,
            std::max<std::int64_t>({a.exp.ceil(), b.exp.ceil(), 1}), w);
        return pos + neg;
    });

    QSeries rhs = with_precision_target(precision, [&](Exponent w) {
        SignedMonomial q1 = SignedMonomial::q_power(Exponent(1));
        SignedMonomial ax = a * x;
        QSeries numer = mul(mul(poch_inf(b * a.inverse(), w), poch_inf(q1 * ax.inverse(), w)),
                            mul(poch_inf(ax, w), poch_inf(q1, w)));
        QSeries denom = mul(mul(inv_poch_inf(b, w), inv_poch_inf(b * ax.inverse(), w)),
                            mul(inv_poch_inf(q1 * a.inverse(), w), inv_poch_inf(x, w)));
        return mul(numer, denom);
    });

    return compare_at(lhs, rhs, precision);
}

}  // namespace heckmort

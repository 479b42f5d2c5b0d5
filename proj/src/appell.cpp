#include "heckmort/appell.hpp"

#include <algorithm>

#include "heckmort/theta.hpp"

namespace heckmort {

namespace {

// Numerator sum_r (-1)^r b^C(r,2) z^r / (1 - b^{r-1} x z) with every
// denominator expanded exactly. A term's least possible order is
//   G(r) = C(r,2) e_b + r e_z + max(0, -L(r)),  L(r) = (r-1) e_b + e_x + e_z,
// since the expanded reciprocal has q-order max(0, -L(r)). G is the max of
// two upward parabolas in r (with and without the -L part), so beyond both
// vertices it is monotone in each direction and the outward scans below are
// exhaustive for orders under the horizon.
QSeries appell_numerator(const AppellSpec& sp, Exponent w) {
    const Exponent eb = sp.base.exp, ex = sp.x.exp, ez = sp.z.exp;
    auto g = [&](std::int64_t r) { return Exponent(Rat64::binom2(Rat64(r))) * eb + Exponent(r) * ez; };
    auto L = [&](std::int64_t r) { return Exponent(r - 1) * eb + ex + ez; };
    auto G = [&](std::int64_t r) {
        Exponent lower = g(r);
        Exponent l = L(r);
        if (l < Exponent(0)) lower += -l;
        return lower;
    };

    QSeries acc(w);
    auto emit = [&](std::int64_t r) {
        std::int64_t b2 = r * (r - 1) / 2;
        Coeff c = coeff_pow(sp.base.coeff, b2) * coeff_pow(sp.z.coeff, r);
        if (r % 2 != 0) c = -c;
        SignedMonomial pre(c, g(r));
        SignedMonomial u = sp.base.pow(Rat64(r - 1)) * sp.x * sp.z;
        QSeries rec = expand_reciprocal_one_minus(u, w - pre.exp);
        acc = acc + rec.mul_monomial(pre);
    };

    Rat64 v1 = Rat64(1, 2) - ez / eb;
    Rat64 v2 = Rat64(3, 2) - ez / eb;
    std::int64_t lo = std::min(v1, v2).floor();
    std::int64_t hi = std::max(v1, v2).ceil();
    for (std::int64_t r = lo; r <= hi; ++r) emit(r);
    for (std::int64_t r = hi + 1; G(r) < w; ++r) emit(r);
    for (std::int64_t r = lo - 1; G(r) < w; --r) emit(r);
    return acc;
}

}  // namespace

QSeries appell_m(const AppellSpec& spec, Exponent precision) {
    if (!(spec.base.exp > Exponent(0)))
        throw std::domain_error("appell_m: base must have positive q-order");
    if (spec.z.integral_power_of(spec.base))
        throw EngineError(ErrorKind::PoleAtSpecialization,
                          "appell_m: z = " + spec.z.str() + " is an integral power of the base");
    if ((spec.x * spec.z).integral_power_of(spec.base))
        throw EngineError(ErrorKind::PoleAtSpecialization,
                          "appell_m: x*z = " + (spec.x * spec.z).str() +
                              " is an integral power of the base");

    return with_precision_target(precision, [&](Exponent w) {
        QSeries num = appell_numerator(spec, w);
        QSeries jz = theta_j(spec.z, spec.base, w);
        return mul(num, invert(jz));
    });
}

namespace {

void check_window(const Exponent& ex, const Exponent& lo, const Exponent& hi, const char* who) {
    if (!(lo < ex) || !(ex < hi))
        throw EngineError(ErrorKind::WindowViolation,
                          std::string(who) + ": q_order(x) = " + ex.str() + " outside (" + lo.str() +
                              ", " + hi.str() + ")");
}

}  // namespace

QSeries lemma_expansion_a(const SignedMonomial& x, Exponent precision) {
    check_window(x.exp, Exponent(0), Exponent(1), "lemma_expansion_a");
    const Exponent ex = x.exp;
    const Coeff nc = -x.coeff;  // (-x)^s coefficient base
    QSeries out(precision);

    // (+,+) quadrant: order C(v+1,2) + vs + s e_x rises in s at slope
    // v + e_x > 0 and its s=0 envelope C(v+1,2) rises in v.
    for (std::int64_t v = 0; Exponent(v * (v + 1) / 2) < precision; ++v) {
        for (std::int64_t s = 0;; ++s) {
            Exponent o = Exponent(v * (v + 1) / 2 + v * s) + Exponent(s) * ex;
            if (!(o < precision)) break;
            out.add_term(o, coeff_pow(nc, s));
        }
    }
    // (-,-) quadrant via v=-1-a, s=-1-b: order C(a+1,2) + (1+b)(1+a) - (1+b) e_x,
    // slope in b is 1 + a - e_x > 0; b=0 envelope rises in a. Weight -1.
    for (std::int64_t a = 0;; ++a) {
        Exponent env = Exponent(a * (a + 1) / 2) + Exponent(a + 1) - ex;
        if (!(env < precision)) break;
        for (std::int64_t b = 0;; ++b) {
            Exponent o = Exponent(a * (a + 1) / 2 + (1 + b) * (1 + a)) - Exponent(1 + b) * ex;
            if (!(o < precision)) break;
            out.add_term(o, -coeff_pow(nc, -1 - b));
        }
    }
    return out;
}

QSeries lemma_expansion_b(const SignedMonomial& x, Exponent precision) {
    check_window(x.exp, Exponent(-1), Exponent(0), "lemma_expansion_b");
    const Exponent ex = x.exp;
    const Coeff nc = -x.coeff;
    QSeries out(precision);

    // (+,+): order C(v+1,2) + (v+1)(s+1) + s e_x, slope v + 1 + e_x > 0,
    // s=0 envelope C(v+1,2) + v + 1.
    for (std::int64_t v = 0; Exponent(v * (v + 1) / 2 + v + 1) < precision; ++v) {
        for (std::int64_t s = 0;; ++s) {
            Exponent o = Exponent(v * (v + 1) / 2 + (v + 1) * (s + 1)) + Exponent(s) * ex;
            if (!(o < precision)) break;
            out.add_term(o, coeff_pow(nc, s));
        }
    }
    // (-,-) via v=-1-a, s=-1-b: order C(a+1,2) + ab - (1+b) e_x, slope in b
    // is a - e_x > 0; b=0 envelope C(a+1,2) - e_x. Weight -1.
    for (std::int64_t a = 0;; ++a) {
        Exponent env = Exponent(a * (a + 1) / 2) - ex;
        if (!(env < precision)) break;
        for (std::int64_t b = 0;; ++b) {
            Exponent o = Exponent(a * (a + 1) / 2 + a * b) - Exponent(1 + b) * ex;
            if (!(o < precision)) break;
            out.add_term(o, -coeff_pow(nc, -1 - b));
        }
    }
    return out;
}

}  // namespace heckmort

#include "heckmort/eulerian.hpp"

#include <stdexcept>

#include "heckmort/theta.hpp"

namespace heckmort {

namespace {

void require_unit_factor(const SignedMonomial& m, const char* where) {
    if (m.exp < Exponent(0) || (m.exp == Exponent(0) && m.coeff == 1))
        throw EngineError(ErrorKind::NonUnitFactor,
                          std::string(where) + ": factor 1 - " + m.str() + " is not a unit");
}

SignedMonomial qpow(std::int64_t e) { return SignedMonomial::q_power(Exponent(e)); }

SignedMonomial neg_qpow(std::int64_t e) { return SignedMonomial(Coeff(-1), Exponent(e)); }

}  // namespace

QSeries pochhammer(const PochhammerSpec& spec, Exponent precision) {
    if (!(Exponent(0) < spec.base.exp))
        throw std::domain_error("pochhammer: base must have positive q-order");
    if (spec.length && *spec.length < 0)
        throw std::domain_error("pochhammer: length must be nonnegative");
    QSeries acc = QSeries::constant(1, precision);
    SignedMonomial m = spec.arg;
    for (std::int64_t k = 0; !spec.length || k < *spec.length; ++k, m = m * spec.base) {
        if (!(m.exp < precision)) break;  // remaining factors are 1 mod q^P
        require_unit_factor(m, "pochhammer");
        acc = mul(acc, QSeries::one_minus(m, precision));
    }
    return acc;
}

QSeries g_universal(const SignedMonomial& x, const SignedMonomial& base, Exponent precision) {
    if (!(Exponent(0) < base.exp))
        throw std::domain_error("g_universal: base must have positive q-order");
    Exponent ax = x.exp < Exponent(0) ? -x.exp : x.exp;
    Exponent w = precision + ax + Exponent(1);
    QSeries acc(w);
    QSeries den_inv = QSeries::constant(1, w);
    SignedMonomial xf = x;                    // next factor of (x; base)_{n+1}
    SignedMonomial bf = base * x.inverse();   // next factor of (base/x; base)_n
    for (std::int64_t n = 0; base.exp * Rat64(n) * Rat64(n) < w; ++n) {
        require_unit_factor(xf, "g_universal");
        den_inv = mul(den_inv, expand_reciprocal_one_minus(xf, w));
        xf = xf * base;
        if (n > 0) {
            require_unit_factor(bf, "g_universal");
            den_inv = mul(den_inv, expand_reciprocal_one_minus(bf, w));
            bf = bf * base;
        }
        acc = acc + den_inv.mul_monomial(base.pow(Rat64(n) * Rat64(n))).truncated(w);
    }
    acc = acc + QSeries::constant(-1, w);
    return acc.mul_monomial(x.inverse()).truncated(precision);
}

namespace {

// sum_{n>=0} q^{n^2} / (-q; q)_n
QSeries build_f0_lhs(Exponent w) {
    QSeries acc(w);
    QSeries den_inv = QSeries::constant(1, w);
    for (std::int64_t n = 0; Exponent(n * n) < w; ++n) {
        if (n > 0) den_inv = mul(den_inv, expand_reciprocal_one_minus(neg_qpow(n), w));
        acc = acc + den_inv.mul_monomial(qpow(n * n));
    }
    return acc;
}

// sum_{n>=0} q^{2n^2} / (q; q)_{2n}
QSeries build_slater39_lhs(Exponent w) {
    QSeries acc(w);
    QSeries den_inv = QSeries::constant(1, w);
    for (std::int64_t n = 0; Exponent(2 * n * n) < w; ++n) {
        if (n > 0) {
            den_inv = mul(den_inv, expand_reciprocal_one_minus(qpow(2 * n - 1), w));
            den_inv = mul(den_inv, expand_reciprocal_one_minus(qpow(2 * n), w));
        }
        acc = acc + den_inv.mul_monomial(qpow(2 * n * n));
    }
    return acc;
}

// sum_{n>=0} q^{2n^2} / (-q; q)_{2n}
QSeries build_andrews114_lhs(Exponent w) {
    QSeries acc(w);
    QSeries den_inv = QSeries::constant(1, w);
    for (std::int64_t n = 0; Exponent(2 * n * n) < w; ++n) {
        if (n > 0) {
            den_inv = mul(den_inv, expand_reciprocal_one_minus(neg_qpow(2 * n - 1), w));
            den_inv = mul(den_inv, expand_reciprocal_one_minus(neg_qpow(2 * n), w));
        }
        acc = acc + den_inv.mul_monomial(qpow(2 * n * n));
    }
    return acc;
}

// sum_{n>=0} q^{3n^2+2n} / ((q; q)_{2n} (-q^2; q^2)_n)
QSeries build_andrews425_lhs(Exponent w) {
    QSeries acc(w);
    QSeries den_inv = QSeries::constant(1, w);
    for (std::int64_t n = 0; Exponent(3 * n * n + 2 * n) < w; ++n) {
        if (n > 0) {
            den_inv = mul(den_inv, expand_reciprocal_one_minus(qpow(2 * n - 1), w));
            den_inv = mul(den_inv, expand_reciprocal_one_minus(qpow(2 * n), w));
            den_inv = mul(den_inv, expand_reciprocal_one_minus(neg_qpow(2 * n), w));
        }
        acc = acc + den_inv.mul_monomial(qpow(3 * n * n + 2 * n));
    }
    return acc;
}

QSeries even_eta_reciprocal(Exponent w) {
    return invert(pochhammer(PochhammerSpec::infinite(qpow(2), qpow(2)), w));
}

// 1/(q^2; q^2)oo * sum_{n>=0} q^{4n^2+n} (1 - q^{6n+3}) sum_{|j|<=n} (-1)^j q^{-j^2}
QSeries build_andrews114_rhs(Exponent w) {
    QSeries sum(w);
    for (std::int64_t n = 0; Exponent(3 * n * n + n) < w; ++n) {
        for (std::int64_t j = -n; j <= n; ++j) {
            Coeff sgn(j % 2 == 0 ? 1 : -1);
            Exponent e(4 * n * n + n - j * j);
            sum.add_term(e, sgn);
            sum.add_term(e + Exponent(6 * n + 3), -sgn);
        }
    }
    return mul(sum, even_eta_reciprocal(w));
}

// 1/(q^2; q^2)oo * sum_{n>=0} q^{4n^2+2n} (1 - q^{4n+2}) sum_{|j|<=n} (-1)^j (-q)^{-j(3j-1)/2}
QSeries build_andrews425_rhs(Exponent w) {
    QSeries sum(w);
    for (std::int64_t n = 0; Exponent((5 * n * n + 3 * n) / 2) < w; ++n) {
        for (std::int64_t j = -n; j <= n; ++j) {
            std::int64_t pent = j * (3 * j - 1) / 2;
            Coeff sgn((j + pent) % 2 == 0 ? 1 : -1);
            Exponent e(4 * n * n + 2 * n - pent);
            sum.add_term(e, sgn);
            sum.add_term(e + Exponent(4 * n + 2), -sgn);
        }
    }
    return mul(sum, even_eta_reciprocal(w));
}

struct BuiltinEntry {
    const char* name;
    QSeries (*build)(Exponent);
};

constexpr BuiltinEntry kBuiltins[] = {
    {"f0_lhs", build_f0_lhs},
    {"slater39_lhs", build_slater39_lhs},
    {"andrews114_lhs", build_andrews114_lhs},
    {"andrews114_rhs", build_andrews114_rhs},
    {"andrews425_lhs", build_andrews425_lhs},
    {"andrews425_rhs", build_andrews425_rhs},
};

QSeries rhs_f0_conjecture(Exponent precision) {
    return with_precision_target(precision, [](Exponent w) {
        QSeries quot = mul(mul(J(5, 10, JKind::Plain, w), J(2, 5, JKind::Plain, w)),
                           invert(J(0, 1, JKind::Eta, w)));
        QSeries g = g_universal(qpow(2), qpow(10), w);
        return quot + g.mul_monomial(SignedMonomial(Coeff(-2), Exponent(2)));
    });
}

QSeries rhs_slater_39(Exponent precision) {
    return with_precision_target(precision, [](Exponent w) {
        return mul(J(3, 8, JKind::Bar, w), invert(J(0, 2, JKind::Eta, w)));
    });
}

QSeries rhs_mortenson(Exponent precision) {
    return with_precision_target(precision, [](Exponent w) {
        QSeries g = g_universal(neg_qpow(1), qpow(8), w);
        QSeries quot = mul(mul(J(1, 2, JKind::Plain, w), J(3, 8, JKind::Bar, w)),
                           invert(J(0, 2, JKind::Eta, w)));
        return QSeries::constant(2, w) + g.mul_monomial(SignedMonomial(Coeff(-2), Exponent(1))) -
               quot;
    });
}

QSeries rhs_eq_1_5(Exponent precision) {
    return with_precision_target(precision, [](Exponent w) {
        QSeries j2_inv = invert(J(0, 2, JKind::Eta, w));
        QSeries t1 = mul(g_universal(qpow(2), qpow(10), w),
                         mul(theta_j(neg_qpow(1), neg_qpow(5), w), j2_inv))
                         .mul_monomial(SignedMonomial(Coeff(-1), Exponent(2)));
        QSeries t2 = mul(g_universal(qpow(4), qpow(10), w),
                         mul(theta_j(qpow(2), neg_qpow(5), w), j2_inv))
                         .mul_monomial(SignedMonomial(Coeff(1), Exponent(3)));
        QSeries t3 = mul(pow_int(theta_j(neg_qpow(5), neg_qpow(15), w), 3),
                         mul(j2_inv, invert(J(0, 10, JKind::Eta, w))));
        return t1 + t2 + t3;
    });
}

QSeries lhs_f0(Exponent p) { return builtin_series("f0_lhs", p); }
QSeries lhs_slater39(Exponent p) { return builtin_series("slater39_lhs", p); }
QSeries lhs_andrews114(Exponent p) { return builtin_series("andrews114_lhs", p); }
QSeries rhs_andrews114(Exponent p) { return builtin_series("andrews114_rhs", p); }
QSeries lhs_andrews425(Exponent p) { return builtin_series("andrews425_lhs", p); }
QSeries rhs_andrews425(Exponent p) { return builtin_series("andrews425_rhs", p); }

struct CatalogEntry {
    const char* name;
    const char* source;
    QSeries (*lhs)(Exponent);
    QSeries (*rhs)(Exponent);
};

constexpr CatalogEntry kCatalog[] = {
    {"f0_conjecture", "fifth-order mock theta conjecture for f0", lhs_f0, rhs_f0_conjecture},
    {"slater_39", "Slater's list, entry 39", lhs_slater39, rhs_slater_39},
    {"andrews_1_14", "Andrews' double-sum expansion", lhs_andrews114, rhs_andrews114},
    {"mortenson_g_neg_q", "g(-q, q^8) form of the same Eulerian series", lhs_andrews114,
     rhs_mortenson},
    {"andrews_4_25", "Andrews' double-sum expansion", lhs_andrews425, rhs_andrews425},
    {"eq_1_5", "Appell-Lerch style closed form", lhs_andrews425, rhs_eq_1_5},
};

}  // namespace

QSeries builtin_series(const std::string& name, Exponent precision) {
    for (const auto& entry : kBuiltins)
        if (name == entry.name) return entry.build(precision);
    throw EngineError(ErrorKind::UnknownBuiltin, "builtin_series: no builtin named " + name);
}

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& entry : kBuiltins) v.emplace_back(entry.name);
        return v;
    }();
    return names;
}

VerificationReport catalog_verify(const std::string& name, Exponent precision) {
    for (const auto& entry : kCatalog)
        if (name == entry.name) return compare_at(entry.lhs(precision), entry.rhs(precision), precision);
    throw EngineError(ErrorKind::UnknownBuiltin, "catalog_verify: no identity named " + name);
}

const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& entry : kCatalog) v.emplace_back(entry.name);
        return v;
    }();
    return names;
}

}  // namespace heckmort

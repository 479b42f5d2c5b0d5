#include "heckmort/theta.hpp"

namespace heckmort {

namespace {

std::int64_t binom2_int(std::int64_t n) {
    std::int64_t m = Rat64::checked_mul(n, Rat64::checked_add(n, -1));
    return m / 2;
}

void require_positive_base(const SignedMonomial& base, const char* who) {
    if (!(base.exp > Exponent(0)))
        throw std::domain_error(std::string(who) + ": base must have positive q-order");
}

}  // namespace

QSeries theta_j(const SignedMonomial& arg, const SignedMonomial& base, Exponent precision) {
    require_positive_base(base, "theta_j");
    if (arg.integral_power_of(base)) return QSeries::zero(precision);

    QSeries out(precision);
    auto order_of = [&](std::int64_t n) {
        return Exponent(binom2_int(n)) * base.exp + Exponent(n) * arg.exp;
    };
    auto emit = [&](std::int64_t n) {
        Coeff c = coeff_pow(base.coeff, binom2_int(n)) * coeff_pow(arg.coeff, n);
        if (n % 2 != 0) c = -c;
        out.add_term(order_of(n), c);
    };

    // The term order C(n,2) e_b + n e_x is a convex parabola in n with vertex
    // at 1/2 - e_x/e_b; on each side of the vertex it is monotone, so scanning
    // outward until the order clears the horizon loses nothing.
    std::int64_t pivot = (Rat64(1, 2) - arg.exp / base.exp).floor();
    for (std::int64_t n = pivot; order_of(n) < precision; --n) emit(n);
    for (std::int64_t n = pivot + 1; order_of(n) < precision; ++n) emit(n);
    return out;
}

QSeries theta_j(const ThetaSpec& spec, Exponent precision) {
    return theta_j(spec.arg, spec.base, precision);
}

QSeries theta_j_product(const std::vector<SignedMonomial>& args, const SignedMonomial& base,
                        Exponent precision) {
    require_positive_base(base, "theta_j_product");
    if (args.empty()) return QSeries::constant(1, precision);
    return with_precision_target(precision, [&](Exponent w) {
        QSeries acc = theta_j(args[0], base, w);
        for (std::size_t i = 1; i < args.size(); ++i) acc = mul(acc, theta_j(args[i], base, w));
        return acc;
    });
}

QSeries J(std::int64_t a, std::int64_t m, JKind kind, Exponent precision) {
    if (m < 1) throw std::domain_error("J: modulus must be positive");
    switch (kind) {
        case JKind::Plain:
            return theta_j(SignedMonomial(Coeff(1), Exponent(a)), SignedMonomial::q_power(Exponent(m)),
                           precision);
        case JKind::Bar:
            return theta_j(SignedMonomial(Coeff(-1), Exponent(a)), SignedMonomial::q_power(Exponent(m)),
                           precision);
        case JKind::Eta:
            return theta_j(SignedMonomial(Coeff(1), Exponent(m)),
                           SignedMonomial::q_power(Exponent(Rat64::checked_mul(3, m))), precision);
    }
    throw std::domain_error("J: unknown variant");
}

QSeries theta_j_product_form(const ThetaSpec& spec, Exponent precision) {
    require_positive_base(spec.base, "theta_j_product_form");
    if (!(spec.base.coeff > 0))
        throw std::domain_error("theta_j_product_form: base coefficient must be positive");
    if (precision < Exponent(1)) return theta_j_product_form(spec, Exponent(1)).truncated(precision);

    const SignedMonomial& x = spec.arg;
    const SignedMonomial& b = spec.base;

    // Factor monomials: x b^k, b^{k+1} x^{-1}, b^{k+1} for k >= 0. Finitely
    // many have negative q-order; their total order drop widens the working
    // horizon so the final product is still certified to precision. Factors
    // with order >= precision + drop only touch the product at or above the
    // horizon (the accumulated order never falls below -drop).
    Exponent drop(0);
    for (SignedMonomial m = x; m.exp < Exponent(0); m = m * b) drop += -m.exp;
    for (SignedMonomial m = b * x.inverse(); m.exp < Exponent(0); m = m * b) drop += -m.exp;

    Exponent w = precision + drop;
    std::vector<SignedMonomial> monos;
    for (SignedMonomial m = x; m.exp < w; m = m * b) monos.push_back(m);
    for (SignedMonomial m = b * x.inverse(); m.exp < w; m = m * b) monos.push_back(m);
    for (SignedMonomial m = b; m.exp < w; m = m * b) monos.push_back(m);

    // The binomial factors are exact polynomials, so any claimed horizon for
    // them is valid; w + drop keeps the product's propagated horizon at w.
    QSeries acc = QSeries::constant(1, w);
    for (const auto& m : monos) acc = mul(acc, QSeries::one_minus(m, w + drop));
    if (acc.precision() < precision)
        throw EngineError(ErrorKind::InsufficientPrecision,
                          "theta_j_product_form: horizon fell short");
    return acc.truncated(precision);
}

VerificationReport triple_product_check(const ThetaSpec& spec, Exponent precision) {
    QSeries sum_form = theta_j(spec, precision);
    QSeries prod_form = theta_j_product_form(spec, precision);
    return compare_at(sum_form, prod_form, precision);
}

}  // namespace heckmort

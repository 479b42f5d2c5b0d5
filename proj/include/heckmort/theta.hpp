#pragma once

#include <vector>

#include "heckmort/qseries.hpp"

namespace heckmort {

/// Argument/base pair for the theta function
///   j(x; b) = sum_n (-1)^n b^C(n,2) x^n,
/// both exact monomials, with q_order(base) > 0.
struct ThetaSpec {
    SignedMonomial arg;
    SignedMonomial base;
};

/// Series-sum evaluation. When the argument is an integral power of the base
/// the function is identically zero and the zero series is returned at full
/// precision.
QSeries theta_j(const ThetaSpec& spec, Exponent precision);
QSeries theta_j(const SignedMonomial& arg, const SignedMonomial& base, Exponent precision);

/// j(x1, ..., xk; b) = prod_i j(xi; b).
QSeries theta_j_product(const std::vector<SignedMonomial>& args, const SignedMonomial& base,
                        Exponent precision);

enum class JKind { Plain, Bar, Eta };

/// The standard abbreviations with base q^m:
///   Plain: j(q^a; q^m)    Bar: j(-q^a; q^m)    Eta: j(q^m; q^{3m}).
QSeries J(std::int64_t a, std::int64_t m, JKind kind, Exponent precision);

/// Product-form evaluation (x;b)oo (b/x;b)oo (b;b)oo, truncated exactly.
/// Requires a positive base coefficient.
QSeries theta_j_product_form(const ThetaSpec& spec, Exponent precision);

/// Compares the series-sum and product-form evaluations below the horizon.
VerificationReport triple_product_check(const ThetaSpec& spec, Exponent precision);

}  // namespace heckmort

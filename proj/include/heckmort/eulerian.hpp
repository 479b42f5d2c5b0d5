#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heckmort/qseries.hpp"

namespace heckmort {

/// Finite or infinite q-Pochhammer product (arg; base)_length.
/// Every factor 1 - arg*base^k must be a unit: the monomial needs
/// nonnegative q-order, and constant factors must not vanish.
struct PochhammerSpec {
    SignedMonomial arg;
    SignedMonomial base;
    std::optional<std::int64_t> length;  // nullopt: infinite product

    static PochhammerSpec finite(const SignedMonomial& arg, const SignedMonomial& base,
                                 std::int64_t n) {
        return {arg, base, n};
    }
    static PochhammerSpec infinite(const SignedMonomial& arg, const SignedMonomial& base) {
        return {arg, base, std::nullopt};
    }
};

QSeries pochhammer(const PochhammerSpec& spec, Exponent precision);

/// g(x, b) = x^{-1} (-1 + sum_{n>=0} b^{n^2} / ((x; b)_{n+1} (b/x; b)_n)).
QSeries g_universal(const SignedMonomial& x, const SignedMonomial& base, Exponent precision);

/// Named Eulerian series and explicit double-sum right-hand sides.
QSeries builtin_series(const std::string& name, Exponent precision);
const std::vector<std::string>& builtin_names();

/// Named identity checks pairing a builtin with its closed form.
VerificationReport catalog_verify(const std::string& name, Exponent precision);
const std::vector<std::string>& catalog_names();

}  // namespace heckmort

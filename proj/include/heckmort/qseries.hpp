#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heckmort/errors.hpp"
#include "heckmort/rat64.hpp"

namespace heckmort {

/// Exact rational coefficients with arbitrary precision.
using Coeff = mpq_class;

/// c * q^e with c != 0. The atom used for specializations and prefactors.
struct SignedMonomial {
    Coeff coeff;
    Exponent exp;

    SignedMonomial(Coeff c, Exponent e) : coeff(std::move(c)), exp(e) {
        if (coeff == 0) throw std::domain_error("SignedMonomial: zero coefficient");
    }

    static SignedMonomial q_power(Exponent e) { return SignedMonomial(Coeff(1), e); }
    static SignedMonomial one() { return SignedMonomial(Coeff(1), Exponent(0)); }

    SignedMonomial negated() const { return SignedMonomial(-coeff, exp); }
    SignedMonomial inverse() const { return SignedMonomial(1 / coeff, -exp); }

    friend SignedMonomial operator*(const SignedMonomial& a, const SignedMonomial& b) {
        return SignedMonomial(a.coeff * b.coeff, a.exp + b.exp);
    }

    friend bool operator==(const SignedMonomial& a, const SignedMonomial& b) {
        return a.exp == b.exp && a.coeff == b.coeff;
    }
    friend bool operator!=(const SignedMonomial& a, const SignedMonomial& b) { return !(a == b); }

    /// Exact power with rational exponent k. Integral k always works; for
    /// fractional k the coefficient must be positive (HalfPowerOfNegative
    /// otherwise) and its k-th power must be rational (NonrepresentablePower
    /// otherwise).
    SignedMonomial pow(const Rat64& k) const;

    /// If this monomial equals base^k for an integer k, return k.
    std::optional<std::int64_t> integral_power_of(const SignedMonomial& base) const;

    std::string str() const;
};

/// Integer power of an exact rational; e may be negative.
Coeff coeff_pow(const Coeff& c, std::int64_t e);

enum class VerifyStatus { Verified, Mismatch, Inconclusive };

struct MismatchInfo {
    Exponent exp;
    Coeff lhs;
    Coeff rhs;
};

struct VerificationReport {
    VerifyStatus status = VerifyStatus::Inconclusive;
    Exponent checked_to = Exponent(0);
    std::optional<MismatchInfo> first_mismatch;
    double elapsed_ms = 0.0;

    bool verified() const { return status == VerifyStatus::Verified; }
};

const char* verify_status_name(VerifyStatus s);

/// Truncated Laurent series in q with rational exponents: the stored terms
/// are exactly the nonzero coefficients at exponents strictly below the
/// precision horizon; nothing is known at or above it.
class QSeries {
public:
    using TermMap = std::map<Exponent, Coeff>;

    explicit QSeries(Exponent precision) : prec_(precision) {}
    QSeries(TermMap terms, Exponent precision);

    static QSeries zero(Exponent precision) { return QSeries(precision); }
    static QSeries constant(const Coeff& c, Exponent precision);
    static QSeries monomial(const SignedMonomial& m, Exponent precision);
    static QSeries one_minus(const SignedMonomial& m, Exponent precision);

    const TermMap& terms() const { return terms_; }
    Exponent precision() const { return prec_; }
    std::size_t term_count() const { return terms_.size(); }
    bool known_zero() const { return terms_.empty(); }

    /// Least exponent carrying a nonzero coefficient, if any is known.
    std::optional<Exponent> q_order() const;

    /// Coefficient at exponent e; requires e below the precision horizon.
    Coeff coeff_at(const Exponent& e) const;

    void add_term(const Exponent& e, const Coeff& c);

    QSeries truncated(Exponent new_precision) const;

    friend QSeries operator+(const QSeries& a, const QSeries& b);
    friend QSeries operator-(const QSeries& a, const QSeries& b);
    friend QSeries operator-(const QSeries& a);

    QSeries scaled(const Coeff& c) const;
    QSeries mul_monomial(const SignedMonomial& m) const;

    /// Reindex q -> q^d for a positive integer d.
    QSeries substitute_q_power(std::int64_t d) const;

    std::string str() const;

private:
    TermMap terms_;
    Exponent prec_;  // exponent horizon; terms_ keys are all < prec_
};

/// Cauchy product, straightforward reference loop. Kept as the behavioral
/// baseline the parallel kernel is tested against.
QSeries mul_serial(const QSeries& a, const QSeries& b);

/// Cauchy product with the outer term loop split across OpenMP threads;
/// per-thread partial sums are merged afterwards. Falls back to the serial
/// loop when built without OpenMP.
QSeries mul_parallel(const QSeries& a, const QSeries& b);

/// Dispatches between the serial and parallel kernels on problem size.
QSeries mul(const QSeries& a, const QSeries& b);

inline QSeries operator*(const QSeries& a, const QSeries& b) { return mul(a, b); }

/// Multiplicative inverse via Newton iteration with doubling precision.
/// Requires a known nonzero leading term below the horizon.
QSeries invert(const QSeries& a);

/// a^n for integer n; negative n inverts first.
QSeries pow_int(const QSeries& a, std::int64_t n);

/// 1/(1 - m) expanded exactly: geometric tail for q_order(m) > 0, the
/// reversed geometric tail for q_order(m) < 0, and the exact constant
/// 1/(1-c) when m is a constant c != 1 (PoleAtSpecialization for c == 1).
QSeries expand_reciprocal_one_minus(const SignedMonomial& m, Exponent precision);

/// Coefficientwise comparison strictly below min(precision(a), precision(b)).
VerificationReport compare(const QSeries& a, const QSeries& b);

/// Comparison that additionally demands the certified horizon reach
/// requested_order; reports Inconclusive when it falls short (a mismatch
/// below the reachable horizon still reports Mismatch).
VerificationReport compare_at(const QSeries& a, const QSeries& b, const Exponent& requested_order);

/// Runs build(working_precision) with rising working precision until the
/// result is certified at least to target, then truncates to target exactly.
template <class Builder>
QSeries with_precision_target(const Exponent& target, Builder&& build, int max_rounds = 8) {
    Exponent working = target;
    for (int round = 0; round < max_rounds; ++round) {
        QSeries s = build(working);
        if (s.precision() >= target) return s.truncated(target);
        Exponent deficit = target - s.precision();
        working += deficit + deficit + Exponent(1);
    }
    throw EngineError(ErrorKind::InsufficientPrecision,
                      "with_precision_target: horizon unreachable after retries");
}

}  // namespace heckmort

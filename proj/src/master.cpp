#include "heckmort/master.hpp"

#include <chrono>
#include <numeric>
#include <stdexcept>

#include "heckmort/appell.hpp"
#include "heckmort/errors.hpp"

namespace heckmort {

namespace {

SignedMonomial mono_mul(const SignedMonomial& a, const SignedMonomial& b) {
    return SignedMonomial(a.coeff * b.coeff, a.exp + b.exp);
}

SignedMonomial q_power(const Rat64& e) { return SignedMonomial(Coeff(1), e); }

std::int64_t binom2(std::int64_t k) { return Rat64::checked_mul(k, k - 1) / 2; }

void validate(const MasterParams& mp) {
    if (mp.n < 1 || mp.p < 1) throw std::domain_error("MasterParams: n and p must be positive");
    if (std::gcd(mp.n, mp.p) != 1)
        throw std::domain_error("MasterParams: n and p must be coprime");
}

}  // namespace

std::int64_t MasterParams::discriminant() const {
    validate(*this);
    return Rat64::checked_mul(p, 2 * n + p);
}

std::vector<ThetaQuotientTerm> theta_np_terms(const MasterParams& mp,
                                              const Specialization& spec) {
    const std::int64_t n = mp.n;
    const std::int64_t p = mp.p;
    const std::int64_t disc = mp.discriminant();                 // p(2n+p)
    const std::int64_t big = Rat64::checked_mul(p, disc);        // p^2(2n+p)
    const std::int64_t ratio_base = Rat64::checked_mul(n, p * p);
    // Row/column indices carry the fractional shift {(n-1)/2}: zero for odd n,
    // one half for even n. Every exponent below still reduces to an integer.
    const Rat64 shift = (n % 2 != 0) ? Rat64(0) : Rat64(1, 2);
    const SignedMonomial xneg = spec.x.negated();
    const SignedMonomial yneg = spec.y.negated();

    std::vector<ThetaQuotientTerm> terms;
    terms.reserve(static_cast<std::size_t>(p * p));
    for (std::int64_t row = 0; row < p; ++row) {
        for (std::int64_t col = 0; col < p; ++col) {
            const Rat64 r = Rat64(row) + shift;
            const Rat64 s = Rat64(col) + shift;
            const Rat64 alpha = r - Rat64(n - 1, 2);
            const Rat64 beta = s + Rat64(n + 1, 2);
            const Rat64 e = Rat64(n) * Rat64::binom2(alpha) + Rat64(n + p) * alpha * beta +
                            Rat64(n) * Rat64::binom2(beta);
            const SignedMonomial prefactor =
                mono_mul(mono_mul(xneg.pow(alpha), yneg.pow(beta)), q_power(e));

            const ThetaSpec num_ratio{
                mono_mul(mono_mul(SignedMonomial(Coeff(-1), Rat64(n * p) * (s - r)),
                                  spec.x.pow(Rat64(n))),
                         spec.y.pow(Rat64(-n))),
                q_power(Rat64(ratio_base))};
            const ThetaSpec num_product{
                mono_mul(mono_mul(q_power(Rat64(disc) * (r + s) + Rat64(p * (n + p))),
                                  spec.x.pow(Rat64(p))),
                         spec.y.pow(Rat64(p))),
                q_power(Rat64(big))};
            const ThetaSpec den_y_over_x{
                mono_mul(mono_mul(q_power(Rat64(disc) * r + Rat64(p * (n + p), 2)),
                                  yneg.pow(Rat64(n + p))),
                         xneg.pow(Rat64(-n))),
                q_power(Rat64(big))};
            const ThetaSpec den_x_over_y{
                mono_mul(mono_mul(q_power(Rat64(disc) * s + Rat64(p * (n + p), 2)),
                                  xneg.pow(Rat64(n + p))),
                         yneg.pow(Rat64(-n))),
                q_power(Rat64(big))};
            terms.push_back(
                ThetaQuotientTerm{prefactor, num_ratio, num_product, den_y_over_x, den_x_over_y});
        }
    }
    return terms;
}

QSeries theta_np(const MasterParams& mp, const Specialization& spec, Exponent precision) {
    const auto terms = theta_np_terms(mp, spec);
    // Genericity: j(x;b) vanishes identically exactly when x is an integral
    // power of b, decidable from the monomials. The Jbar_{0,M} factor never
    // vanishes (its argument has coefficient -1, powers of the base have +1).
    for (const auto& t : terms) {
        for (const ThetaSpec* den : {&t.den_y_over_x, &t.den_x_over_y}) {
            if (den->arg.integral_power_of(den->base).has_value())
                throw EngineError(ErrorKind::NonGenericSpecialization,
                                  "theta_np: a denominator theta vanishes at this "
                                  "specialization");
        }
    }

    const std::int64_t bar_base = Rat64::checked_mul(mp.n, mp.discriminant());
    const std::int64_t eta_base = Rat64::checked_mul(mp.p, mp.discriminant());
    return with_precision_target(precision, [&](Exponent w) {
        const QSeries common =
            mul(pow_int(J(0, eta_base, JKind::Eta, w), 3), invert(J(0, bar_base, JKind::Bar, w)));
        QSeries acc(w);
        for (const auto& t : terms) {
            const QSeries num = mul(theta_j(t.num_ratio, w), theta_j(t.num_product, w));
            const QSeries den = mul(theta_j(t.den_y_over_x, w), theta_j(t.den_x_over_y, w));
            acc = acc + mul(mul(num, invert(den)), common).mul_monomial(t.prefactor);
        }
        return acc;
    });
}

QSeries g_abc(const HeckeParams& params, const SignedMonomial& x, const SignedMonomial& y,
              Exponent precision) {
    if (params.a < 1 || params.b < 1 || params.c < 1)
        throw std::domain_error("g_abc: a, b, c must be positive");
    const std::int64_t disc = params.discriminant();
    if (disc <= 0) throw std::domain_error("g_abc: b^2 - ac must be positive");
    const std::int64_t b = params.b;

    // One of the two symmetric halves: the outer index t runs to A-1, the
    // companion parameter C2 weights the q-binomial, X feeds the theta and Y
    // the Appell sum.
    const auto half = [&](std::int64_t A, std::int64_t C2, const SignedMonomial& X,
                          const SignedMonomial& Y, Exponent w) {
        const SignedMonomial xneg = X.negated();
        const SignedMonomial yneg = Y.negated();
        QSeries acc(w);
        for (std::int64_t t = 0; t < A; ++t) {
            const QSeries theta =
                theta_j(SignedMonomial(X.coeff, X.exp + Rat64(Rat64::checked_mul(b, t))),
                        q_power(Rat64(A)), w);
            const SignedMonomial appell_arg = mono_mul(
                SignedMonomial(Coeff(-1),
                               Rat64(A * binom2(b + 1) - C2 * binom2(A + 1) -
                                     Rat64::checked_mul(t, disc))),
                mono_mul(yneg.pow(Rat64(A)), xneg.pow(Rat64(-b))));
            const QSeries m = appell_m(AppellSpec{appell_arg,
                                                  q_power(Rat64(Rat64::checked_mul(A, disc))),
                                                  SignedMonomial(Coeff(-1), Rat64(0))},
                                       w);
            const SignedMonomial outer =
                mono_mul(yneg.pow(Rat64(t)), q_power(Rat64(Rat64::checked_mul(C2, binom2(t)))));
            acc = acc + mul(theta, m).mul_monomial(outer);
        }
        return acc;
    };

    return with_precision_target(precision, [&](Exponent w) {
        return half(params.a, params.c, x, y, w) + half(params.c, params.a, y, x, w);
    });
}

VerificationReport verify_master(const MasterParams& mp, const Specialization& spec,
                                 Exponent precision) {
    const HeckeParams hp{mp.n, mp.n + mp.p, mp.n};
    const QSeries lhs = f_abc(hp, spec.x, spec.y, precision);
    const QSeries rhs =
        g_abc(hp, spec.x, spec.y, precision) + theta_np(mp, spec, precision);
    return compare_at(lhs, rhs, precision);
}

bool WindowSide::all() const {
    if (!hypothesis) return false;
    for (bool ok : theta_windows)
        if (!ok) return false;
    for (bool ok : appell_windows)
        if (!ok) return false;
    return true;
}

namespace {

WindowSide window_side(std::int64_t n, std::int64_t p, const Rat64& order) {
    const std::int64_t disc = Rat64::checked_mul(p, 2 * n + p);
    const std::int64_t modulus = Rat64::checked_mul(n, disc);
    const std::int64_t big = Rat64::checked_mul(p, disc);
    const std::int64_t level = Rat64::checked_mul(n, n * p + binom2(p + 1));

    WindowSide side;
    side.hypothesis =
        Rat64(-p * (n + p), 2) < order && order < Rat64(p * (3 * n + p), 2);
    side.theta_windows.reserve(static_cast<std::size_t>(p));
    for (std::int64_t r = 0; r < p; ++r) {
        const Rat64 v = Rat64(p * (n + p), 2) + Rat64(disc * r) + order;
        side.theta_windows.push_back(Rat64(0) < v && v < Rat64(big));
    }
    side.appell_windows.reserve(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) {
        Rat64 v = Rat64(level - disc * k) - order;
        if (k > n / 2) v += Rat64(modulus);
        side.appell_windows.push_back(Rat64(0) < v && v < Rat64(modulus));
    }
    return side;
}

}  // namespace

WindowReport check_windows(const MasterParams& mp, const Specialization& spec) {
    validate(mp);
    const Rat64 direct = Rat64(mp.n + mp.p) * spec.y.exp - Rat64(mp.n) * spec.x.exp;
    const Rat64 swapped = Rat64(mp.n + mp.p) * spec.x.exp - Rat64(mp.n) * spec.y.exp;
    return WindowReport{window_side(mp.n, mp.p, direct), window_side(mp.n, mp.p, swapped)};
}

VerificationReport lemma_sign_ids(std::int64_t n, std::int64_t bound, std::int64_t perturb,
                                  SignIdentityCase* witness) {
    if (n < 1) throw std::domain_error("lemma_sign_ids: n must be positive");
    if (bound < 1) throw std::domain_error("lemma_sign_ids: bound must be positive");
    const auto start = std::chrono::steady_clock::now();
    VerificationReport report;
    report.checked_to = Exponent(bound);
    const std::int64_t offset = n / 2 + perturb;

    const auto fail = [&](int which, std::int64_t r, std::int64_t k, std::int64_t w, int lhs,
                          int rhs) {
        report.status = VerifyStatus::Mismatch;
        report.first_mismatch = MismatchInfo{Exponent(which), Coeff(lhs), Coeff(rhs)};
        if (witness != nullptr) *witness = SignIdentityCase{which, r, k, w, lhs, rhs};
    };

    for (std::int64_t r = -bound; r <= bound; ++r) {
        for (std::int64_t w = -bound; w <= bound; ++w) {
            for (std::int64_t k = 0; k < n; ++k) {
                // The two identities split at different columns for even n:
                // the first needs k + floor(n/2) <= n-1, the second
                // k <= floor(n/2). For odd n both reduce to k <= (n-1)/2.
                const bool low1 = k + n / 2 <= n - 1;
                const bool low2 = k <= n / 2;
                const int lhs1 = sg(n * r + k + n * w + offset);
                const int rhs1 = -(low1 ? sg(-w - 1 - r) : sg(-w - 2 - r));
                if (lhs1 != rhs1) {
                    fail(1, r, k, w, lhs1, rhs1);
                    report.elapsed_ms = std::chrono::duration<double, std::milli>(
                                            std::chrono::steady_clock::now() - start)
                                            .count();
                    return report;
                }
                const int lhs2 = sg(n * r + k - n * w - offset - 1);
                const int rhs2 = -(low2 ? sg(w - r) : sg(w - 1 - r));
                if (lhs2 != rhs2) {
                    fail(2, r, k, w, lhs2, rhs2);
                    report.elapsed_ms = std::chrono::duration<double, std::milli>(
                                            std::chrono::steady_clock::now() - start)
                                            .count();
                    return report;
                }
            }
        }
    }
    report.status = VerifyStatus::Verified;
    report.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    return report;
}

}  // namespace heckmort

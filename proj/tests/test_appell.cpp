#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heckmort/appell.hpp"
#include "heckmort/theta.hpp"
#include "testutil.hpp"

using namespace heckmort;
using testutil::Rng;

namespace {

SignedMonomial qpow(std::int64_t n, std::int64_t d = 1) {
    return SignedMonomial::q_power(Exponent(n, d));
}

// Fixed-range oracle with generic series inversion for every denominator
// factor, no branch analysis and no certified scan.
QSeries appell_oracle(const AppellSpec& sp, Exponent P, int R = 30) {
    QSeries num(P);
    for (int r = -R; r <= R; ++r) {
        std::int64_t b2 = static_cast<std::int64_t>(r) * (r - 1) / 2;
        Coeff c = coeff_pow(sp.base.coeff, b2) * coeff_pow(sp.z.coeff, r);
        if (r % 2 != 0) c = -c;
        SignedMonomial pre(c, Exponent(b2) * sp.base.exp + Exponent(r) * sp.z.exp);
        SignedMonomial u = sp.base.pow(Rat64(r - 1)) * sp.x * sp.z;
        Exponent pad = u.exp < Exponent(0) ? -(u.exp + u.exp) : Exponent(0);
        Exponent target = P - pre.exp;
        Exponent working = std::max(target + pad + Exponent(1), Exponent(1));
        QSeries rec = invert(QSeries::one_minus(u, working));
        num = num + rec.truncated(std::min(target, rec.precision())).mul_monomial(pre);
    }
    QSeries jz = theta_j(sp.z, sp.base, P + Exponent(8));
    QSeries quotient = mul(num, invert(jz));
    return quotient;
}

}  // namespace

TEST_CASE("poles are rejected symbolically") {
    CHECK_THROWS_AS(appell_m({qpow(1), qpow(1), qpow(2)}, Exponent(10)), EngineError);
    try {
        appell_m({qpow(1), qpow(1), qpow(2)}, Exponent(10));
    } catch (const EngineError& e) {
        CHECK(e.kind() == ErrorKind::PoleAtSpecialization);
    }
    // z passes (coefficient -1) but x*z = q^3 is base^3
    CHECK_THROWS_AS(appell_m({qpow(4).negated(), qpow(1), qpow(-1).negated()}, Exponent(10)),
                    EngineError);
    // z = 1 = base^0
    CHECK_THROWS_AS(appell_m({qpow(2), qpow(1), SignedMonomial::one()}, Exponent(10)), EngineError);
}

TEST_CASE("appell sum against the fixed-range oracle") {
    Rng rng(987123);
    int done = 0;
    while (done < 60) {
        SignedMonomial base = qpow(1);
        SignedMonomial x = testutil::rand_monomial(rng, -2, 3, 2);
        SignedMonomial z = testutil::rand_monomial(rng, -2, 3, 2);
        Exponent p(testutil::rand_int(rng, 4, 11));
        QSeries got(0), expect(0);
        try {
            got = appell_m({x, base, z}, p);
        } catch (const EngineError& e) {
            CHECK(e.kind() == ErrorKind::PoleAtSpecialization);
            continue;
        }
        expect = appell_oracle({x, base, z}, p);
        auto rep = compare(got, expect);
        CHECK(rep.verified());
        CHECK(rep.checked_to >= p);
        CHECK(got.precision() == p);
        ++done;
    }
}

TEST_CASE("denominator with zero order hits the exact constant branch") {
    // u_0 = q^{-1} * q * (-1) = -1, so the r = 0 term carries 1/(1 - (-1)) = 1/2
    QSeries m = appell_m({qpow(1), qpow(1), SignedMonomial::one().negated()}, Exponent(12));
    QSeries oracle = appell_oracle({qpow(1), qpow(1), SignedMonomial::one().negated()}, Exponent(12));
    CHECK(compare(m, oracle).verified());
}

TEST_CASE("first expansion window matches Jbar_{0,1} m(x,q,-1)") {
    Rng rng(5511);
    const SignedMonomial q1 = qpow(1);
    const SignedMonomial z = SignedMonomial::one().negated();
    Exponent p(22);
    std::vector<SignedMonomial> xs = {qpow(1, 2), qpow(1, 3), qpow(2, 3),
                                      SignedMonomial(Coeff(-1), Exponent(1, 2)),
                                      SignedMonomial(Coeff(2), Exponent(3, 4)),
                                      SignedMonomial(Coeff(-1, 2), Exponent(1, 4))};
    for (int i = 0; i < 6; ++i) {
        std::int64_t den = testutil::rand_int(rng, 2, 5);
        xs.push_back(SignedMonomial(testutil::rand_nonzero_coeff(rng),
                                    Exponent(testutil::rand_int(rng, 1, den - 1), den)));
    }
    for (const auto& x : xs) {
        QSeries lhs = with_precision_target(p, [&](Exponent w) {
            return mul(J(0, 1, JKind::Bar, w), appell_m({x, q1, z}, w));
        });
        QSeries rhs = lemma_expansion_a(x, p);
        auto rep = compare_at(lhs, rhs, p);
        CHECK(rep.verified());
    }
}

TEST_CASE("second expansion window matches Jbar_{0,1} m(x,q,-1)") {
    Rng rng(6622);
    const SignedMonomial q1 = qpow(1);
    const SignedMonomial z = SignedMonomial::one().negated();
    Exponent p(22);
    std::vector<SignedMonomial> xs = {qpow(-1, 2), qpow(-2, 3),
                                      SignedMonomial(Coeff(-1), Exponent(-1, 2)),
                                      SignedMonomial(Coeff(3), Exponent(-1, 4))};
    for (int i = 0; i < 6; ++i) {
        std::int64_t den = testutil::rand_int(rng, 2, 5);
        xs.push_back(SignedMonomial(testutil::rand_nonzero_coeff(rng),
                                    Exponent(-testutil::rand_int(rng, 1, den - 1), den)));
    }
    for (const auto& x : xs) {
        QSeries lhs = with_precision_target(p, [&](Exponent w) {
            return mul(J(0, 1, JKind::Bar, w), appell_m({x, q1, z}, w));
        });
        QSeries rhs = lemma_expansion_b(x, p);
        auto rep = compare_at(lhs, rhs, p);
        CHECK(rep.verified());
    }
}

TEST_CASE("expansion windows are enforced") {
    CHECK_THROWS_AS(lemma_expansion_a(qpow(2), Exponent(10)), EngineError);
    CHECK_THROWS_AS(lemma_expansion_a(qpow(0), Exponent(10)), EngineError);
    CHECK_THROWS_AS(lemma_expansion_a(qpow(-1, 2), Exponent(10)), EngineError);
    CHECK_THROWS_AS(lemma_expansion_b(qpow(1, 2), Exponent(10)), EngineError);
    CHECK_THROWS_AS(lemma_expansion_b(qpow(-1), Exponent(10)), EngineError);
    try {
        lemma_expansion_b(qpow(-3, 2), Exponent(10));
    } catch (const EngineError& e) {
        CHECK(e.kind() == ErrorKind::WindowViolation);
    }
}

TEST_CASE("rescaling consistency under q -> q^d") {
    Rng rng(8833);
    int done = 0;
    while (done < 20) {
        SignedMonomial x = testutil::rand_monomial(rng, -2, 3, 1);
        SignedMonomial z = testutil::rand_monomial(rng, -2, 3, 1);
        std::int64_t d = testutil::rand_int(rng, 2, 4);
        Exponent p(testutil::rand_int(rng, 4, 9));
        try {
            QSeries base_q = appell_m({x, qpow(1), z}, p).substitute_q_power(d);
            SignedMonomial xd(x.coeff, x.exp * Exponent(d));
            SignedMonomial zd(z.coeff, z.exp * Exponent(d));
            QSeries base_qd = appell_m({xd, qpow(d), zd}, p * Exponent(d));
            CHECK(compare(base_q, base_qd).verified());
            CHECK(base_q.precision() == base_qd.precision());
            ++done;
        } catch (const EngineError& e) {
            CHECK(e.kind() == ErrorKind::PoleAtSpecialization);
        }
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "heckmort/hecke.hpp"
#include "heckmort/theta.hpp"
#include "testutil.hpp"

using namespace heckmort;
using testutil::Rng;

namespace {

// Independent check for the double sum: walk the square |r|, |s| <= radius
// directly and keep whatever lands below the horizon. The radius must be
// generous enough that C(r,2) alone clears the horizon on the rim.
QSeries f_oracle(const HeckeParams& p, const SignedMonomial& x, const SignedMonomial& y,
                 Exponent precision, std::int64_t radius) {
    QSeries out(precision);
    for (std::int64_t r = -radius; r <= radius; ++r) {
        for (std::int64_t s = -radius; s <= radius; ++s) {
            if (sg(r) != sg(s)) continue;
            Rat64 R(r), S(s);
            Exponent e = Rat64(p.a) * Rat64::binom2(R) + Rat64(p.b) * R * S +
                         Rat64(p.c) * Rat64::binom2(S) + x.exp * R + y.exp * S;
            out.add_term(e, Coeff(sg(r)) * coeff_pow(-x.coeff, r) * coeff_pow(-y.coeff, s));
        }
    }
    return out;
}

SignedMonomial qpow(std::int64_t num, std::int64_t den = 1) {
    return SignedMonomial::q_power(Exponent(num, den));
}

}  // namespace

TEST_CASE("quadrant sign weights") {
    for (std::int64_t r = -12; r <= 12; ++r) {
        CHECK(sg(r) == -sg(-1 - r));
        for (std::int64_t s = -12; s <= 12; ++s) {
            int expected = (r >= 0 && s >= 0) ? 1 : (r < 0 && s < 0) ? -1 : 0;
            CHECK(sg2(r, s) == expected);
            CHECK(sg2(r, s) == sg2(s, r));
        }
    }
}

TEST_CASE("f_{1,2,1} at x = y = q") {
    QSeries f = f_abc({1, 2, 1}, qpow(1), qpow(1), Exponent(7));
    QSeries expected(Exponent(7));
    expected.add_term(Exponent(0), 1);
    expected.add_term(Exponent(1), -2);
    expected.add_term(Exponent(2), -1);
    expected.add_term(Exponent(3), 2);
    expected.add_term(Exponent(4), 1);
    expected.add_term(Exponent(5), 2);
    expected.add_term(Exponent(6), -2);
    CHECK(compare(f, expected).verified());
    CHECK(compare(f_abc({1, 2, 1}, qpow(1), qpow(1), Exponent(30)),
                  f_oracle({1, 2, 1}, qpow(1), qpow(1), Exponent(30), 60))
              .verified());
}

TEST_CASE("double sum agrees with direct enumeration") {
    Rng rng(0x8ec5u);
    for (int trial = 0; trial < 20; ++trial) {
        HeckeParams p{testutil::rand_int(rng, 1, 4), testutil::rand_int(rng, 1, 4),
                      testutil::rand_int(rng, 1, 4)};
        SignedMonomial x(testutil::rand_nonzero_coeff(rng), testutil::rand_rat(rng, -4, 4, 3));
        SignedMonomial y(testutil::rand_nonzero_coeff(rng), testutil::rand_rat(rng, -4, 4, 3));
        QSeries lhs = f_abc(p, x, y, Exponent(18));
        QSeries rhs = f_oracle(p, x, y, Exponent(18), 70);
        CAPTURE(trial);
        CHECK(compare(lhs, rhs).verified());
    }
}

TEST_CASE("swapping outer coefficients with the arguments is a symmetry") {
    Rng rng(0x51d3u);
    for (int trial = 0; trial < 20; ++trial) {
        HeckeParams p{testutil::rand_int(rng, 1, 4), testutil::rand_int(rng, 1, 4),
                      testutil::rand_int(rng, 1, 4)};
        SignedMonomial x(testutil::rand_nonzero_coeff(rng), testutil::rand_rat(rng, -3, 3, 2));
        SignedMonomial y(testutil::rand_nonzero_coeff(rng), testutil::rand_rat(rng, -3, 3, 2));
        QSeries lr = f_abc(p, x, y, Exponent(15));
        QSeries rl = f_abc({p.c, p.b, p.a}, y, x, Exponent(15));
        CAPTURE(trial);
        CHECK(compare(lr, rl).verified());
    }
}

TEST_CASE("base rescaling commutes with the double sum") {
    Rng rng(0xba5eu);
    for (int trial = 0; trial < 10; ++trial) {
        HeckeParams p{testutil::rand_int(rng, 1, 3), testutil::rand_int(rng, 1, 3),
                      testutil::rand_int(rng, 1, 3)};
        SignedMonomial x(testutil::rand_nonzero_coeff(rng), testutil::rand_rat(rng, -2, 3, 2));
        SignedMonomial y(testutil::rand_nonzero_coeff(rng), testutil::rand_rat(rng, -2, 3, 2));
        std::int64_t d = testutil::rand_int(rng, 2, 3);
        QSeries scaled = f_abc(p, x, y, Exponent(12)).substitute_q_power(d);
        SignedMonomial xd(x.coeff, x.exp * Rat64(d));
        SignedMonomial yd(y.coeff, y.exp * Rat64(d));
        QSeries direct = f_abc({d * p.a, d * p.b, d * p.c}, xd, yd, Exponent(12 * d));
        CAPTURE(trial);
        CHECK(compare(scaled, direct).verified());
    }
}

TEST_CASE("corollary kernel equals the triple-product quotient") {
    Rng rng(0xc02u);
    auto rhs_quotient = [](const SignedMonomial& x, const SignedMonomial& y, Exponent precision) {
        SignedMonomial base = SignedMonomial::q_power(Exponent(1));
        return with_precision_target(precision, [&](Exponent w) {
            QSeries j1 = J(0, 1, JKind::Eta, w);
            QSeries numer = mul(pow_int(j1, 3), theta_j(x * y, base, w));
            QSeries denom = mul(theta_j(x, base, w), theta_j(y, base, w));
            return mul(numer, invert(denom));
        });
    };

    SUBCASE("fixed pair") {
        SignedMonomial x(Coeff(2), Exponent(1, 2));
        SignedMonomial y(Coeff(3), Exponent(1, 3));
        QSeries lhs = onepsi_corollary_lhs(x, y, Exponent(50));
        CHECK(compare(lhs, rhs_quotient(x, y, Exponent(50))).verified());
    }

    SUBCASE("random in-window pairs") {
        for (int trial = 0; trial < 10; ++trial) {
            auto frac_exp = [&] {
                std::int64_t den = testutil::rand_int(rng, 2, 6);
                return Exponent(testutil::rand_int(rng, 1, den - 1), den);
            };
            auto pick = [&] {
                for (;;) {
                    Coeff c = testutil::rand_nonzero_coeff(rng);
                    if (c != 1 && c != -1) return SignedMonomial(c, frac_exp());
                }
            };
            SignedMonomial x = pick(), y = pick();
            CAPTURE(trial);
            QSeries lhs = onepsi_corollary_lhs(x, y, Exponent(40));
            CHECK(compare(lhs, rhs_quotient(x, y, Exponent(40))).verified());
        }
    }

    SUBCASE("window enforcement") {
        CHECK_THROWS_AS(onepsi_corollary_lhs(qpow(0), qpow(1, 2), Exponent(10)), EngineError);
        CHECK_THROWS_AS(onepsi_corollary_lhs(qpow(1, 2), qpow(1), Exponent(10)), EngineError);
        try {
            onepsi_corollary_lhs(qpow(3, 2), qpow(1, 2), Exponent(10));
            CHECK(false);
        } catch (const EngineError& e) {
            CHECK(e.kind() == ErrorKind::WindowViolation);
        }
    }
}

TEST_CASE("bilateral ratio sum equals its eight-factor product form") {
    SUBCASE("fixed in-window triples") {
        // b = q a reduces every ratio factor to (1 - a) / (1 - a q^n)
        SignedMonomial a(Coeff(3), Exponent(1, 3));
        SignedMonomial b(Coeff(3), Exponent(4, 3));
        CHECK(onepsi_general(a, b, qpow(1, 2), Exponent(30)).verified());

        CHECK(onepsi_general(SignedMonomial(Coeff(-2), Exponent(-1, 2)),
                             SignedMonomial(Coeff(5, 3), Exponent(2)), qpow(1), Exponent(30))
                  .verified());
    }

    SUBCASE("random in-window triples") {
        Rng rng(0x1b51u);
        for (int trial = 0; trial < 12; ++trial) {
            SignedMonomial a(testutil::rand_nonzero_coeff(rng), testutil::rand_rat(rng, -2, 2, 3));
            if (a.coeff == 1 && a.exp.is_integer() && a.exp.num() >= 1)
                a = SignedMonomial(Coeff(2), a.exp);
            Exponent ex(testutil::rand_int(rng, 1, 4), testutil::rand_int(rng, 2, 4));
            Exponent gap = ex + Exponent(testutil::rand_int(rng, 1, 3), 2);
            SignedMonomial b(testutil::rand_nonzero_coeff(rng), a.exp + gap);
            SignedMonomial x(testutil::rand_nonzero_coeff(rng), ex);
            CAPTURE(trial);
            CHECK(onepsi_general(a, b, x, Exponent(25)).verified());
        }
    }

    SUBCASE("windows and poles are enforced") {
        // q_order(x) outside (0, q_order(b/a))
        CHECK_THROWS_AS(onepsi_general(SignedMonomial(Coeff(2), Exponent(0)),
                                       SignedMonomial(Coeff(2), Exponent(1, 4)), qpow(1, 2),
                                       Exponent(10)),
                        EngineError);
        CHECK_THROWS_AS(onepsi_general(SignedMonomial(Coeff(2), Exponent(0)),
                                       SignedMonomial(Coeff(2), Exponent(2)), qpow(0),
                                       Exponent(10)),
                        EngineError);
        // vanishing pochhammer factors on either side
        try {
            onepsi_general(SignedMonomial(Coeff(2), Exponent(-1)), SignedMonomial::one(),
                           qpow(1, 2), Exponent(10));
            CHECK(false);
        } catch (const EngineError& e) {
            CHECK(e.kind() == ErrorKind::PoleAtSpecialization);
        }
        try {
            onepsi_general(qpow(1), SignedMonomial(Coeff(2), Exponent(3)), qpow(1), Exponent(10));
            CHECK(false);
        } catch (const EngineError& e) {
            CHECK(e.kind() == ErrorKind::PoleAtSpecialization);
        }
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>

#include "heckmort/errors.hpp"
#include "heckmort/replay.hpp"
#include "heckmort/theta.hpp"
#include "testutil.hpp"

using namespace heckmort;
using testutil::Rng;

namespace {

SignedMonomial qpow(std::int64_t num, std::int64_t den = 1) {
    return SignedMonomial::q_power(Exponent(num, den));
}

std::int64_t binom2i(std::int64_t k) { return k * (k - 1) / 2; }

// Bilateral theta sum as a one-dimensional lattice: j(x;q) enumerated
// termwise, exercising the exponent scaling and the coefficient powers.
LatticeSum theta_lattice(const SignedMonomial& x, Exponent precision) {
    LatticeSum sum;
    sum.dims = 1;
    sum.scale = 2 * x.exp.den();
    sum.x = x;
    sum.y = qpow(1);
    sum.precision = precision;
    const std::int64_t scale = sum.scale;
    sum.terms = [scale](const std::int64_t* idx, std::vector<LatticeTerm>& out) {
        out.push_back({scale * binom2i(idx[0]), idx[0], 0, 2});
    };
    return sum;
}

// Cone-weighted quadratic double sum plus a ladder index: the shape every
// replay stage shares, here with free small parameters.
LatticeSum cone_lattice(const Specialization& spec, Exponent precision, std::int64_t a,
                        std::int64_t e, std::int64_t c, std::int64_t m) {
    LatticeSum sum;
    sum.dims = m > 0 ? 3 : 2;
    sum.scale = 2 * std::max(spec.x.exp.den(), spec.y.exp.den());
    sum.x = spec.x;
    sum.y = spec.y;
    sum.precision = precision;
    const std::int64_t scale = sum.scale;
    sum.terms = [=](const std::int64_t* idx, std::vector<LatticeTerm>& out) {
        const std::int64_t i = idx[0], j = idx[1];
        const int w2 = 2 * sg2(i, j);
        if (w2 == 0) return;
        std::int64_t exp = a * binom2i(i) + e * i * j + c * binom2i(j);
        if (m > 0) exp += m * binom2i(idx[2] + 1);
        out.push_back({scale * exp, i, j, w2});
    };
    return sum;
}

}  // namespace

TEST_CASE("lattice enumeration reproduces theta series") {
    const SignedMonomial specs[] = {qpow(1), qpow(1, 2), SignedMonomial(Coeff(-2), Exponent(1)),
                                    SignedMonomial(Coeff(3, 2), Exponent(3, 2))};
    for (const SignedMonomial& x : specs) {
        CAPTURE(x.exp.str());
        LatticeSum sum = theta_lattice(x, Exponent(25));
        QSeries direct = lattice_box_sum_serial(sum, 64);
        QSeries reference = theta_j(x, qpow(1), Exponent(25));
        CHECK(compare_at(direct, reference, Exponent(25)).verified());
        CHECK(compare_at(lattice_box_sum(sum), reference, Exponent(25)).verified());
    }
}

TEST_CASE("serial and parallel enumerations are identical") {
    Specialization spec{qpow(1), qpow(1)};
    for (std::int64_t radius : {5, 12, 19}) {
        LatticeSum sum = cone_lattice(spec, Exponent(40), 1, 3, 1, 8);
        QSeries serial = lattice_box_sum_serial(sum, radius);
        QSeries parallel = lattice_box_sum_parallel(sum, radius);
        CHECK(serial.terms() == parallel.terms());
        CHECK(serial.precision() == parallel.precision());
    }
    LatticeSum one_dim = theta_lattice(SignedMonomial(Coeff(-2), Exponent(1)), Exponent(30));
    CHECK(lattice_box_sum_serial(one_dim, 40).terms() ==
          lattice_box_sum_parallel(one_dim, 40).terms());
}

TEST_CASE("doubling agreement is sound against oversized boxes") {
    Rng rng(0xb0c5edu);
    int checked = 0;
    for (int trial = 0; trial < 120; ++trial) {
        Specialization spec{testutil::rand_monomial(rng, 0, 3), testutil::rand_monomial(rng, 0, 3)};
        const std::int64_t a = testutil::rand_int(rng, 1, 4);
        const std::int64_t c = testutil::rand_int(rng, 1, 4);
        const std::int64_t e = testutil::rand_int(rng, 0, 4);
        LatticeSum sum = cone_lattice(spec, Exponent(12), a, e, c, 0);
        QSeries adaptive = lattice_box_sum(sum);
        QSeries oversized = lattice_box_sum_serial(sum, 128);
        CHECK(adaptive.terms() == oversized.terms());
        ++checked;
    }
    CHECK(checked == 120);

    // One full three-index instance against a box far past stabilization.
    LatticeSum deep = cone_lattice(Specialization{qpow(1), qpow(2)}, Exponent(30), 2, 4, 2, 10);
    CHECK(lattice_box_sum(deep).terms() == lattice_box_sum_serial(deep, 96).terms());
}

TEST_CASE("non-stabilizing enumerations hit the radius cap") {
    LatticeSum sum;
    sum.dims = 1;
    sum.scale = 2;
    sum.x = qpow(1);
    sum.y = qpow(1);
    sum.precision = Exponent(5);
    sum.terms = [](const std::int64_t*, std::vector<LatticeTerm>& out) {
        out.push_back({0, 0, 0, 2});  // every point feeds the constant term
    };
    try {
        lattice_box_sum(sum, 4, 64);
        FAIL("expected NonterminatingEnumeration");
    } catch (const EngineError& err) {
        CHECK(err.kind() == ErrorKind::NonterminatingEnumeration);
    }
}

TEST_CASE("replay requires an odd first parameter") {
    CHECK_THROWS_AS(replay_proof(MasterParams{2, 1}, Specialization{qpow(1), qpow(2)}, Exponent(10)),
                    std::domain_error);
    CHECK_THROWS_AS(replay_proof(MasterParams{4, 1}, Specialization{qpow(1), qpow(1)}, Exponent(10)),
                    std::domain_error);
}

TEST_CASE("replay rejects specializations outside the windows") {
    // (n,p) = (1,2) admits 3*ord(y) - ord(x) strictly between -3 and 5.
    const Specialization far_out{SignedMonomial(Coeff(-1), Exponent(3)),
                                 SignedMonomial(Coeff(-1), Exponent(5))};
    try {
        replay_proof(MasterParams{1, 2}, far_out, Exponent(10));
        FAIL("expected WindowViolation");
    } catch (const EngineError& err) {
        CHECK(err.kind() == ErrorKind::WindowViolation);
    }

    // The window is open: landing exactly on the endpoint is rejected too.
    const Specialization boundary{SignedMonomial(Coeff(2), Exponent(1)), qpow(2)};
    try {
        replay_proof(MasterParams{1, 2}, boundary, Exponent(10));
        FAIL("expected WindowViolation");
    } catch (const EngineError& err) {
        CHECK(err.kind() == ErrorKind::WindowViolation);
    }
}

TEST_CASE("replayed chain verifies every rewrite") {
    struct Case {
        MasterParams mp;
        Specialization spec;
        Exponent precision;
    };
    const Case cases[] = {
        {{1, 2}, {qpow(1), qpow(1)}, Exponent(30)},
        {{3, 2}, {qpow(1), qpow(1)}, Exponent(25)},
    };
    for (const Case& c : cases) {
        CAPTURE(c.mp.n);
        CAPTURE(c.mp.p);
        auto stages = replay_proof(c.mp, c.spec, c.precision);
        REQUIRE(stages.size() == 11);
        std::set<std::string> labels;
        for (const ReplayStage& st : stages) {
            CAPTURE(st.label);
            CHECK(st.report.verified());
            CHECK(st.report.checked_to >= c.precision);
            CHECK(!st.label.empty());
            labels.insert(st.label);
        }
        CHECK(labels.size() == stages.size());
    }
}

TEST_CASE("replay covers signed, scaled, and fractional specializations") {
    const SignedMonomial neg_q(Coeff(-1), Exponent(1));
    SUBCASE("negative unit coefficients") {
        auto stages = replay_proof(MasterParams{1, 2}, Specialization{neg_q, neg_q}, Exponent(22));
        for (const ReplayStage& st : stages) CHECK(st.report.verified());
    }
    SUBCASE("half-integral exponent") {
        auto stages =
            replay_proof(MasterParams{1, 2}, Specialization{qpow(1, 2), qpow(1)}, Exponent(18));
        for (const ReplayStage& st : stages) CHECK(st.report.verified());
    }
    SUBCASE("non-unit coefficient") {
        auto stages = replay_proof(MasterParams{1, 1},
                                   Specialization{SignedMonomial(Coeff(2), Exponent(1)), qpow(1)},
                                   Exponent(16));
        for (const ReplayStage& st : stages) CHECK(st.report.verified());
    }
}

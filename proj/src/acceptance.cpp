#include "heckmort/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <random>
#include <regex>
#include <sstream>
#include <utility>

#include "heckmort/appell.hpp"
#include "heckmort/dsl.hpp"
#include "heckmort/eulerian.hpp"
#include "heckmort/hecke.hpp"
#include "heckmort/master.hpp"
#include "heckmort/replay.hpp"
#include "heckmort/runner.hpp"
#include "heckmort/theta.hpp"

namespace heckmort {

namespace {

using Rng = std::mt19937_64;
using Clock = std::chrono::steady_clock;

std::int64_t rand_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

Rat64 rand_rat(Rng& rng, std::int64_t num_lo, std::int64_t num_hi, std::int64_t den_hi) {
    return Rat64(rand_int(rng, num_lo, num_hi), rand_int(rng, 1, den_hi));
}

Coeff rand_coeff(Rng& rng) {
    Coeff c(rand_int(rng, -9, 9), rand_int(rng, 1, 5));
    c.canonicalize();
    return c;
}

Coeff rand_nonzero_coeff(Rng& rng) {
    for (;;) {
        Coeff c = rand_coeff(rng);
        if (c != 0) return c;
    }
}

SignedMonomial rand_monomial(Rng& rng, std::int64_t exp_lo, std::int64_t exp_hi,
                             std::int64_t den_hi = 2) {
    return SignedMonomial(rand_nonzero_coeff(rng), rand_rat(rng, exp_lo, exp_hi, den_hi));
}

QSeries rand_series(Rng& rng, Exponent precision) {
    QSeries s(precision);
    int n = static_cast<int>(rand_int(rng, 0, 12));
    for (int i = 0; i < n; ++i) {
        Exponent e = rand_rat(rng, -4, precision.num() + 2, 3);
        if (e < precision) s.add_term(e, rand_coeff(rng));
    }
    return s;
}

QSeries rand_unit_series(Rng& rng, Exponent precision) {
    for (;;) {
        QSeries s = rand_series(rng, precision);
        s.add_term(Exponent(rand_int(rng, -3, 0)), rand_nonzero_coeff(rng));
        if (s.q_order()) return s;
    }
}

SignedMonomial qpow(std::int64_t num, std::int64_t den = 1) {
    return SignedMonomial::q_power(Exponent(num, den));
}

// An exponent strictly between 0 and 1, never an integer.
Exponent proper_fraction(Rng& rng) {
    std::int64_t den = rand_int(rng, 2, 6);
    return Exponent(rand_int(rng, 1, den - 1), den);
}

using Outcome = std::pair<bool, std::string>;

// --- 1: theta sum form vs triple-product form -------------------------------

Outcome check_triple_product() {
    Rng rng(0x7e57a1u);
    const Exponent P(200);
    for (int trial = 0; trial < 25; ++trial) {
        // The product form requires a positive base coefficient.
        Coeff bc(rand_int(rng, 1, 9), rand_int(rng, 1, 5));
        bc.canonicalize();
        ThetaSpec spec{rand_monomial(rng, -3, 6), SignedMonomial(bc, rand_rat(rng, 1, 4, 2))};
        QSeries sum = with_precision_target(P, [&](Exponent w) { return theta_j(spec, w); });
        QSeries prod =
            with_precision_target(P, [&](Exponent w) { return theta_j_product_form(spec, w); });
        if (!compare_at(sum, prod, P).verified())
            return {false, "mismatch for arg " + spec.arg.str() + ", base " + spec.base.str()};
    }
    return {true, "25 random specializations to order 200"};
}

// --- 2: bilateral kernel equals the triple-product quotient -----------------

Outcome check_bilateral_kernel() {
    Rng rng(0x1b11a7u);
    const Exponent P(100);
    const SignedMonomial base = qpow(1);
    for (int trial = 0; trial < 10; ++trial) {
        SignedMonomial x(rand_nonzero_coeff(rng), proper_fraction(rng));
        SignedMonomial y(rand_nonzero_coeff(rng), proper_fraction(rng));
        QSeries lhs = onepsi_corollary_lhs(x, y, P);
        // Both theta denominators are units (constant term 1), so the
        // quotient identity is equivalent to the cross-multiplied one and
        // needs no series inversion. The kernel reaches below order zero, so
        // the unit factor carries that much extra horizon for the product.
        Exponent slack(0);
        if (auto o = lhs.q_order(); o && *o < Exponent(0)) slack = -*o;
        QSeries numer = with_precision_target(
            P, [&](Exponent w) { return mul(pow_int(J(0, 1, JKind::Eta, w), 3),
                                            theta_j(x * y, base, w)); });
        QSeries denom = with_precision_target(
            P + slack, [&](Exponent w) { return mul(theta_j(x, base, w), theta_j(y, base, w)); });
        if (!compare_at(mul(lhs, denom), numer, P).verified())
            return {false, "mismatch for x " + x.str() + ", y " + y.str()};
    }
    return {true, "10 in-window pairs to order 100, cross-multiplied"};
}

// --- 3: master formula across the parameter sweep ---------------------------

bool generic_spec(const MasterParams& mp, const Specialization& spec) {
    for (const auto& t : theta_np_terms(mp, spec))
        for (const ThetaSpec* den : {&t.den_y_over_x, &t.den_x_over_y})
            if (den->arg.integral_power_of(den->base)) return false;
    return true;
}

Outcome check_master_sweep() {
    const Exponent P(60);
    const std::vector<MasterParams> pairs = {{1, 1}, {1, 2}, {2, 1}, {1, 3},
                                             {3, 1}, {2, 3}, {3, 2}};
    int done = 0;
    for (const auto& mp : pairs) {
        // For even n, candidates keep -x and -y at positive coefficients.
        std::vector<Specialization> candidates;
        if (mp.n % 2 == 0) {
            for (auto [a, b] : {std::pair<int, int>{1, 2}, {2, 1}, {1, 3}, {2, 3}, {3, 2},
                                {1, 4}, {3, 4}, {2, 5}})
                candidates.push_back({SignedMonomial(Coeff(-1), Exponent(a)),
                                      SignedMonomial(Coeff(-1), Exponent(b))});
        } else {
            for (auto [a, b] : {std::pair<int, int>{1, 1}, {2, 1}, {1, 2}, {2, 3}, {3, 2},
                                {1, 3}, {3, 1}, {2, 5}})
                candidates.push_back({qpow(a), qpow(b)});
        }
        int used = 0;
        for (const auto& spec : candidates) {
            if (used == 3) break;
            if (!generic_spec(mp, spec)) continue;
            if (!verify_master(mp, spec, P).verified())
                return {false, "mismatch at (" + std::to_string(mp.n) + "," +
                                   std::to_string(mp.p) + ") with x " + spec.x.str() + ", y " +
                                   spec.y.str()};
            ++used;
            ++done;
        }
        if (used < 3)
            return {false, "fewer than 3 generic specializations for (" +
                               std::to_string(mp.n) + "," + std::to_string(mp.p) + ")"};
    }
    return {true, std::to_string(done) + " verifications across 7 parameter pairs to order 60"};
}

// --- 4 through 8: the identity catalog ---------------------------------------

Outcome check_catalog(const std::string& name, std::int64_t order) {
    auto rep = catalog_verify(name, Exponent(order));
    if (!rep.verified()) {
        std::string where =
            rep.first_mismatch ? " at q^" + rep.first_mismatch->exp.str() : "";
        return {false, name + " failed" + where};
    }
    return {true, name + " to order " + std::to_string(order)};
}

Outcome check_catalog_pair(const std::string& a, const std::string& b, std::int64_t order,
                           double each_limit_ms) {
    auto t0 = Clock::now();
    Outcome ra = check_catalog(a, order);
    double ams = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    if (!ra.first) return ra;
    if (ams > each_limit_ms)
        return {false, a + " exceeded its budget (" + std::to_string(ams) + " ms)"};
    t0 = Clock::now();
    Outcome rb = check_catalog(b, order);
    double bms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    if (!rb.first) return rb;
    if (bms > each_limit_ms)
        return {false, b + " exceeded its budget (" + std::to_string(bms) + " ms)"};
    return {true, a + " and " + b + " to order " + std::to_string(order)};
}

// --- 9: one-sided expansions of the Appell factor ---------------------------

Outcome check_appell_expansions() {
    Rng rng(0x9e11aau);
    const Exponent P(60);
    const SignedMonomial base = qpow(1);
    const SignedMonomial minus_one(Coeff(-1), Exponent(0));
    auto product_form = [&](const SignedMonomial& x) {
        return with_precision_target(P, [&](Exponent w) {
            return mul(J(0, 1, JKind::Bar, w), appell_m(AppellSpec{x, base, minus_one}, w));
        });
    };
    for (int trial = 0; trial < 10; ++trial) {
        SignedMonomial x(rand_nonzero_coeff(rng), proper_fraction(rng));
        if (!compare_at(lemma_expansion_a(x, P), product_form(x), P).verified())
            return {false, "first expansion mismatch at x " + x.str()};
    }
    for (int trial = 0; trial < 10; ++trial) {
        SignedMonomial x(rand_nonzero_coeff(rng), -proper_fraction(rng));
        if (!compare_at(lemma_expansion_b(x, P), product_form(x), P).verified())
            return {false, "second expansion mismatch at x " + x.str()};
    }
    return {true, "10 monomials per window to order 60"};
}

// --- 10: sign identities, exhaustive -----------------------------------------

Outcome check_sign_identities() {
    for (std::int64_t n = 1; n <= 9; ++n) {
        SignIdentityCase witness;
        if (!lemma_sign_ids(n, 10, 0, &witness).verified())
            return {false, "counterexample at n " + std::to_string(n) + ", identity " +
                               std::to_string(witness.which) + ", r " +
                               std::to_string(witness.r) + ", k " + std::to_string(witness.k) +
                               ", w " + std::to_string(witness.w)};
    }
    return {true, "n up to 9, indices bounded by 10, zero counterexamples"};
}

// --- 11: derivation replay ----------------------------------------------------

Outcome check_replay() {
    const Exponent P(30);
    int stages = 0;
    for (const auto& mp : {MasterParams{1, 2}, MasterParams{3, 2}}) {
        auto chain = replay_proof(mp, Specialization{qpow(1), qpow(1)}, P);
        for (const auto& stage : chain) {
            if (!stage.report.verified())
                return {false, "stage '" + stage.label + "' failed at (" +
                                   std::to_string(mp.n) + "," + std::to_string(mp.p) + ")"};
            ++stages;
        }
    }
    return {true, std::to_string(stages) + " rewrite stages across two parameter pairs to order 30"};
}

// --- 12: randomized property suites ------------------------------------------

bool suite_ring_laws(std::string& note) {
    Rng rng(0x21a905u);
    for (int i = 0; i < 100; ++i) {
        Exponent p(rand_int(rng, 3, 9));
        QSeries a = rand_series(rng, p);
        QSeries b = rand_series(rng, p);
        QSeries c = rand_series(rng, p);
        bool ok = compare((a + b) + c, a + (b + c)).verified() &&
                  compare(a + b, b + a).verified() && compare(mul(a, b), mul(b, a)).verified() &&
                  compare(mul(mul(a, b), c), mul(a, mul(b, c))).verified() &&
                  compare(mul(a, b + c), mul(a, b) + mul(a, c)).verified() &&
                  compare(a - a, QSeries::zero(p)).verified();
        if (!ok) {
            note = "ring laws failed on case " + std::to_string(i);
            return false;
        }
    }
    return true;
}

bool suite_inversion(std::string& note) {
    Rng rng(0x1417e27u);
    for (int i = 0; i < 100; ++i) {
        Exponent p(rand_int(rng, 3, 8));
        QSeries a = rand_unit_series(rng, p);
        QSeries inv = invert(a);
        bool ok = compare(mul(a, inv), QSeries::constant(1, p)).verified() &&
                  compare(mul(inv, a), QSeries::constant(1, p)).verified() &&
                  compare(invert(inv), a).verified();
        if (!ok) {
            note = "inversion failed on case " + std::to_string(i);
            return false;
        }
    }
    return true;
}

bool suite_pochhammer_cocycle(std::string& note) {
    Rng rng(0xc0cc1eu);
    for (int i = 0; i < 100; ++i) {
        SignedMonomial x = [&] {
            for (;;) {
                SignedMonomial m(rand_nonzero_coeff(rng), rand_rat(rng, 0, 3, 2));
                if (m.exp != Exponent(0) || m.coeff != 1) return m;
            }
        }();
        SignedMonomial b(rand_nonzero_coeff(rng),
                         Exponent(rand_int(rng, 1, 4), rand_int(rng, 1, 2)));
        std::int64_t m = rand_int(rng, 0, 5);
        std::int64_t n = rand_int(rng, 0, 5);
        const Exponent P(30);
        QSeries whole = pochhammer(PochhammerSpec::finite(x, b, m + n), P);
        QSeries split = mul(pochhammer(PochhammerSpec::finite(x, b, m), P),
                            pochhammer(PochhammerSpec::finite(x * b.pow(Rat64(m)), b, n), P));
        if (!compare(whole, split).verified()) {
            note = "cocycle failed on case " + std::to_string(i);
            return false;
        }
    }
    return true;
}

bool suite_theta_symmetry(std::string& note) {
    Rng rng(0x7e7a5eu);
    for (int i = 0; i < 100; ++i) {
        SignedMonomial b = SignedMonomial::q_power(rand_rat(rng, 1, 4, 2));
        SignedMonomial x = rand_monomial(rng, -3, 5);
        Exponent p(rand_int(rng, 5, 16));
        if (!compare(theta_j(x, b, p), theta_j(b * x.inverse(), b, p)).verified()) {
            note = "symmetry failed on case " + std::to_string(i);
            return false;
        }
        Exponent pad = x.exp < Exponent(0) ? -x.exp : x.exp;
        QSeries lhs = theta_j(b * x, b, p);
        QSeries rhs = theta_j(x, b, p + pad).mul_monomial(x.inverse().negated());
        auto rep = compare(lhs, rhs);
        if (!rep.verified() || rep.checked_to < p) {
            note = "quasi-periodicity failed on case " + std::to_string(i);
            return false;
        }
    }
    return true;
}

bool suite_enumeration_doubling(std::string& note) {
    Rng rng(0xd0b1e5u);
    for (int i = 0; i < 100; ++i) {
        Specialization spec{rand_monomial(rng, 0, 3), rand_monomial(rng, 0, 3)};
        const std::int64_t a = rand_int(rng, 1, 4);
        const std::int64_t c = rand_int(rng, 1, 4);
        const std::int64_t e = rand_int(rng, 0, 4);
        LatticeSum sum;
        sum.dims = 2;
        sum.scale = 2 * std::max(spec.x.exp.den(), spec.y.exp.den());
        sum.x = spec.x;
        sum.y = spec.y;
        sum.precision = Exponent(12);
        const std::int64_t scale = sum.scale;
        sum.terms = [=](const std::int64_t* idx, std::vector<LatticeTerm>& out) {
            const std::int64_t r = idx[0], s = idx[1];
            const int w2 = 2 * sg2(r, s);
            if (w2 == 0) return;
            out.push_back({scale * (a * r * (r - 1) / 2 + e * r * s + c * s * (s - 1) / 2), r, s,
                           w2});
        };
        if (lattice_box_sum(sum).terms() != lattice_box_sum_serial(sum, 128).terms()) {
            note = "doubling disagreed with the oversized box on case " + std::to_string(i);
            return false;
        }
    }
    return true;
}

bool suite_f_symmetry(std::string& note) {
    Rng rng(0xf57a11u);
    for (int i = 0; i < 100; ++i) {
        HeckeParams params{rand_int(rng, 1, 3), rand_int(rng, 1, 3), rand_int(rng, 1, 3)};
        SignedMonomial x = rand_monomial(rng, 1, 4);
        SignedMonomial y = rand_monomial(rng, 1, 4);
        const Exponent P(20);
        QSeries direct = f_abc(params, x, y, P);
        QSeries flipped = f_abc(HeckeParams{params.c, params.b, params.a}, y, x, P);
        if (!compare_at(direct, flipped, P).verified()) {
            note = "double-sum symmetry failed on case " + std::to_string(i);
            return false;
        }
    }
    return true;
}

AstPtr make_node(AstNode&& n) { return std::make_shared<const AstNode>(std::move(n)); }

AstPtr rand_rational_node(Rng& rng) {
    AstNode n;
    n.kind = AstKind::Rational;
    Coeff v(rand_int(rng, 0, 12), rand_int(rng, 1, 5));
    v.canonicalize();
    n.value = v;
    return make_node(std::move(n));
}

SignedMonomial rand_mono_literal(Rng& rng) {
    return SignedMonomial(rand_nonzero_coeff(rng), rand_rat(rng, -6, 9, 3));
}

AstPtr rand_call_node(Rng& rng) {
    AstNode n;
    n.kind = AstKind::Call;
    switch (rand_int(rng, 0, 9)) {
        case 0:
            n.name = "J";
            n.ints = {rand_int(rng, -3, 9), rand_int(rng, 1, 12)};
            break;
        case 1:
            n.name = "Jbar";
            n.ints = {rand_int(rng, -3, 9), rand_int(rng, 1, 12)};
            break;
        case 2:
            n.name = "Jm";
            n.ints = {rand_int(rng, 1, 12)};
            break;
        case 3:
            n.name = "j";
            n.monos = {rand_mono_literal(rng), rand_mono_literal(rng)};
            break;
        case 4:
            n.name = "AL";
            n.monos = {rand_mono_literal(rng), rand_mono_literal(rng), rand_mono_literal(rng)};
            break;
        case 5:
            n.name = "f";
            n.ints = {rand_int(rng, 1, 4), rand_int(rng, 1, 4), rand_int(rng, 1, 4)};
            n.monos = {rand_mono_literal(rng), rand_mono_literal(rng)};
            break;
        case 6:
            n.name = "gsum";
            n.ints = {rand_int(rng, 1, 4), rand_int(rng, 1, 4), rand_int(rng, 1, 4)};
            n.monos = {rand_mono_literal(rng), rand_mono_literal(rng)};
            break;
        case 7:
            n.name = "thetaNP";
            n.ints = {rand_int(rng, 1, 4), rand_int(rng, 1, 4)};
            n.monos = {rand_mono_literal(rng), rand_mono_literal(rng)};
            break;
        case 8:
            n.name = "guniv";
            n.monos = {rand_mono_literal(rng), rand_mono_literal(rng)};
            break;
        default: {
            n.name = "builtin";
            const auto& names = builtin_names();
            n.builtin = names[static_cast<std::size_t>(rand_int(
                rng, 0, static_cast<std::int64_t>(names.size()) - 1))];
            break;
        }
    }
    return make_node(std::move(n));
}

AstPtr rand_ast(Rng& rng, int depth) {
    if (depth <= 0 || rand_int(rng, 0, 3) == 0) {
        switch (rand_int(rng, 0, 2)) {
            case 0: return rand_rational_node(rng);
            case 1: {
                AstNode n;
                n.kind = AstKind::Monomial;
                n.mono = rand_mono_literal(rng);
                return make_node(std::move(n));
            }
            default: return rand_call_node(rng);
        }
    }
    AstNode n;
    std::int64_t op = rand_int(rng, 0, 4);
    if (op == 4) {
        n.kind = AstKind::Power;
        n.lhs = rand_ast(rng, depth - 1);
        n.power = rand_int(rng, -3, 3);
        return make_node(std::move(n));
    }
    n.kind = op == 0   ? AstKind::Add
             : op == 1 ? AstKind::Subtract
             : op == 2 ? AstKind::Multiply
                       : AstKind::Divide;
    n.lhs = rand_ast(rng, depth - 1);
    n.rhs = rand_ast(rng, depth - 1);
    return make_node(std::move(n));
}

bool suite_parser_round_trip(std::string& note) {
    Rng rng(0x90a2d7u);
    for (int i = 0; i < 100; ++i) {
        AstPtr ast = rand_ast(rng, 4);
        std::string printed = print_expression(ast);
        AstPtr reparsed;
        try {
            reparsed = parse_expression(printed);
        } catch (const ParseError& e) {
            note = "canonical print failed to reparse on case " + std::to_string(i) + ": " +
                   e.what();
            return false;
        }
        if (!ast_equal(ast, reparsed) || print_expression(reparsed) != printed) {
            note = "round trip changed the tree on case " + std::to_string(i);
            return false;
        }
    }
    return true;
}

// Expression whose evaluation is total: no division, no windowed sums.
AstPtr rand_total_ast(Rng& rng, int depth) {
    if (depth <= 0 || rand_int(rng, 0, 2) == 0) {
        switch (rand_int(rng, 0, 3)) {
            case 0: return rand_rational_node(rng);
            case 1: {
                AstNode n;
                n.kind = AstKind::Monomial;
                n.mono = SignedMonomial(rand_nonzero_coeff(rng), rand_rat(rng, -2, 6, 2));
                return make_node(std::move(n));
            }
            case 2: {
                AstNode n;
                n.kind = AstKind::Call;
                n.name = rand_int(rng, 0, 1) ? "Jbar" : "J";
                n.ints = {rand_int(rng, 0, 6), rand_int(rng, 1, 8)};
                if (n.name == "J" && n.ints[0] % n.ints[1] == 0) n.ints[0] += 1;
                return make_node(std::move(n));
            }
            default: {
                AstNode n;
                n.kind = AstKind::Call;
                n.name = "j";
                n.monos = {SignedMonomial(rand_nonzero_coeff(rng), rand_rat(rng, -2, 4, 2)),
                           SignedMonomial(rand_nonzero_coeff(rng), rand_rat(rng, 1, 3, 2))};
                return make_node(std::move(n));
            }
        }
    }
    AstNode n;
    std::int64_t op = rand_int(rng, 0, 3);
    if (op == 3) {
        n.kind = AstKind::Power;
        n.lhs = rand_total_ast(rng, depth - 1);
        n.power = rand_int(rng, 0, 2);
        return make_node(std::move(n));
    }
    n.kind = op == 0 ? AstKind::Add : op == 1 ? AstKind::Subtract : AstKind::Multiply;
    n.lhs = rand_total_ast(rng, depth - 1);
    n.rhs = rand_total_ast(rng, depth - 1);
    return make_node(std::move(n));
}

std::string strip_elapsed(const std::string& json) {
    static const std::regex field("\"elapsed_ms\": [-+0-9.eE]+");
    return std::regex_replace(json, field, "\"elapsed_ms\": 0");
}

bool suite_cache_determinism(std::string& note) {
    Rng rng(0xcac4edu);
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() /
                   ("heckmort-gate-" + std::to_string(Clock::now().time_since_epoch().count()));
    RunConfig cfg;
    cfg.order = Exponent(12);
    cfg.cache_dir = dir.string();
    bool ok = true;
    for (int i = 0; i < 100 && ok; ++i) {
        AstPtr e = rand_total_ast(rng, 2);
        std::string line = print_expression(e) + " == " + print_expression(e);
        auto cold = run_verify_text(line, cfg);
        auto warm = run_verify_text(line, cfg);
        if (!all_verified(cold) || !all_verified(warm)) {
            note = "self-equation not verified on case " + std::to_string(i);
            ok = false;
            break;
        }
        if (strip_elapsed(reports_to_json(cold)) != strip_elapsed(reports_to_json(warm))) {
            note = "cold and warm reports differ on case " + std::to_string(i);
            ok = false;
        }
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
    return ok;
}

Outcome check_property_suites() {
    const std::pair<const char*, bool (*)(std::string&)> suites[] = {
        {"series ring laws", suite_ring_laws},
        {"inversion", suite_inversion},
        {"pochhammer cocycle", suite_pochhammer_cocycle},
        {"theta symmetry and quasi-periodicity", suite_theta_symmetry},
        {"enumeration-bound doubling", suite_enumeration_doubling},
        {"double-sum symmetry", suite_f_symmetry},
        {"parser round trip", suite_parser_round_trip},
        {"cache determinism", suite_cache_determinism},
    };
    for (const auto& [label, fn] : suites) {
        std::string note;
        if (!fn(note)) return {false, std::string(label) + ": " + note};
    }
    return {true, "8 suites, at least 100 randomized cases each"};
}

}  // namespace

std::vector<AcceptanceResult> run_acceptance() {
    struct Entry {
        const char* name;
        double limit_ms;
        std::function<Outcome()> body;
    };
    const std::vector<Entry> entries = {
        {"triple-product-agreement", 5000, check_triple_product},
        {"bilateral-kernel-quotient", 10000, check_bilateral_kernel},
        {"master-formula-parameter-sweep", 120000, check_master_sweep},
        {"f0-conjecture", 30000, [] { return check_catalog("f0_conjecture", 150); }},
        {"slater-39", 10000, [] { return check_catalog("slater_39", 200); }},
        {"andrews-1-14", 30000, [] { return check_catalog("andrews_1_14", 150); }},
        {"mortenson-g-neg-q", 30000, [] { return check_catalog("mortenson_g_neg_q", 150); }},
        {"andrews-4-25-and-eq-1-5", 120000,
         [] { return check_catalog_pair("andrews_4_25", "eq_1_5", 120, 60000); }},
        {"appell-factor-expansions", 10000, check_appell_expansions},
        {"sign-identities-exhaustive", 5000, check_sign_identities},
        {"derivation-replay", 120000, check_replay},
        {"randomized-property-suites", 0, check_property_suites},
    };

    std::vector<AcceptanceResult> results;
    results.reserve(entries.size());
    for (const auto& entry : entries) {
        AcceptanceResult r;
        r.name = entry.name;
        r.limit_ms = entry.limit_ms;
        auto t0 = Clock::now();
        try {
            auto [ok, detail] = entry.body();
            r.passed = ok;
            r.detail = detail;
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        if (r.passed && r.limit_ms > 0 && r.elapsed_ms > r.limit_ms) {
            r.passed = false;
            r.detail += " (exceeded the time budget)";
        }
        results.push_back(std::move(r));
    }
    return results;
}

std::string format_result(const AcceptanceResult& r) {
    std::ostringstream out;
    out << (r.passed ? "PASS" : "FAIL") << "  " << r.name << "  (" << static_cast<long>(r.elapsed_ms)
        << " ms";
    if (r.limit_ms > 0) out << ", limit " << static_cast<long>(r.limit_ms) << " ms";
    out << ")";
    if (!r.detail.empty()) out << "  " << r.detail;
    return out.str();
}

}  // namespace heckmort

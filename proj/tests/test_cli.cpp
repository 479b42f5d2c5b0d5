#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <string>
#include <utility>
#include <vector>

#include "heckmort/cache.hpp"
#include "heckmort/dsl.hpp"
#include "heckmort/errors.hpp"
#include "heckmort/eulerian.hpp"
#include "heckmort/runner.hpp"
#include "testutil.hpp"

using namespace heckmort;
using testutil::Rng;

namespace {

namespace fs = std::filesystem;

AstPtr make_node(AstNode n) { return std::make_shared<const AstNode>(std::move(n)); }

// A throwaway directory under the system temp root, removed on destruction.
struct TempDir {
    fs::path path;
    TempDir()
        : path(fs::temp_directory_path() /
               ("heckmort-test-" +
                std::to_string(
                    std::chrono::steady_clock::now().time_since_epoch().count()))) {}
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string strip_elapsed(const std::string& json) {
    static const std::regex field("\"elapsed_ms\": [-+0-9.eE]+");
    return std::regex_replace(json, field, "\"elapsed_ms\": 0");
}

SignedMonomial rand_mono_literal(Rng& rng) {
    return SignedMonomial(testutil::rand_nonzero_coeff(rng), testutil::rand_rat(rng, -6, 9, 3));
}

AstPtr rand_call_node(Rng& rng) {
    using testutil::rand_int;
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
        case 6:
            n.name = rand_int(rng, 0, 1) ? "f" : "gsum";
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
            n.builtin = names[static_cast<std::size_t>(
                rand_int(rng, 0, static_cast<std::int64_t>(names.size()) - 1))];
            break;
        }
    }
    return make_node(std::move(n));
}

// Arbitrary tree over the full grammar. Rational leaves stay nonnegative:
// a bare negative literal is not a form the grammar denotes (constants are
// negated through subtraction or a signed monomial), so the printer never
// has to produce one.
AstPtr rand_ast(Rng& rng, int depth) {
    using testutil::rand_int;
    if (depth <= 0 || rand_int(rng, 0, 3) == 0) {
        switch (rand_int(rng, 0, 2)) {
            case 0: {
                AstNode n;
                n.kind = AstKind::Rational;
                Coeff v(rand_int(rng, 0, 12), rand_int(rng, 1, 5));
                v.canonicalize();
                n.value = v;
                return make_node(std::move(n));
            }
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

}  // namespace

TEST_CASE("parse errors carry position and expectations") {
    try {
        parse_equation("J(2,) == 1");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() == 5);
        CHECK(!e.expected().empty());
        CHECK(!e.reason().empty());
        CHECK(std::string(e.what()).find("line 1") != std::string::npos);
        CHECK(std::string(e.what()).find("column 5") != std::string::npos);
    }

    // Newlines inside the text advance the reported line.
    try {
        parse_equation("1 ==\n  J(2,)");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 7);
    }

    CHECK_THROWS_AS(parse_equation("1 + 1"), ParseError);      // missing ==
    CHECK_THROWS_AS(parse_expression("(1 + q^1"), ParseError); // unclosed paren
    CHECK_THROWS_AS(parse_expression("q^1 $ 2"), ParseError);  // stray character
    CHECK_THROWS_AS(parse_expression("J(1,2)^(3)"), ParseError);  // exponent literal only
    CHECK_THROWS_AS(parse_expression("frob(1)"), ParseError);  // unknown function
    CHECK_THROWS_AS(parse_expression(""), ParseError);
}

TEST_CASE("rational literals bind tighter than exponentiation") {
    AstPtr pow = parse_expression("2/3^2");
    REQUIRE(pow->kind == AstKind::Power);
    CHECK(compare_at(evaluate(pow, Exponent(5)), QSeries::constant(Coeff(4, 9), Exponent(5)),
                     Exponent(5))
              .verified());

    AstPtr quot = parse_expression("2/(3)^2");
    REQUIRE(quot->kind == AstKind::Divide);
    CHECK(compare_at(evaluate(quot, Exponent(5)), QSeries::constant(Coeff(2, 9), Exponent(5)),
                     Exponent(5))
              .verified());
}

TEST_CASE("monomial literals round trip through their printed form") {
    SignedMonomial m = parse_monomial("-c3/2*q^-5/2");
    CHECK(m.coeff == Coeff(-3, 2));
    CHECK(m.exp == Exponent(-5, 2));

    const char* texts[] = {"q^1", "-q^1/2", "c3/2*q^-5/2", "-c7*q^0", "q^-3", "c1/4*q^2"};
    for (const char* text : texts) {
        CAPTURE(text);
        SignedMonomial parsed = parse_monomial(text);
        SignedMonomial back = parse_monomial(parsed.str());
        CHECK(back == parsed);
    }

    CHECK_THROWS_AS(parse_monomial("q"), ParseError);         // exponent is mandatory
    CHECK_THROWS_AS(parse_monomial("3*q^1"), ParseError);     // coefficients need the c marker
    CHECK_THROWS_AS(parse_monomial("q^1 + q^2"), ParseError); // single monomial only
}

TEST_CASE("canonical prints reparse to the same tree") {
    Rng rng(0x5eeded1u);
    for (int i = 0; i < 200; ++i) {
        AstPtr ast = rand_ast(rng, 4);
        std::string printed = print_expression(ast);
        CAPTURE(printed);
        AstPtr reparsed = parse_expression(printed);
        CHECK(ast_equal(ast, reparsed));
        CHECK(print_expression(reparsed) == printed);
        CHECK(ast_hash(ast) == ast_hash(reparsed));
    }
}

TEST_CASE("expression hashing ignores formatting but not structure") {
    AstPtr a = parse_expression("J(1, 2) * Jbar(3, 8)");
    AstPtr b = parse_expression("J(1,2)*Jbar(3,8)");
    AstPtr c = parse_expression("Jbar(3,8)*J(1,2)");
    CHECK(ast_equal(a, b));
    CHECK(ast_hash(a) == ast_hash(b));
    CHECK(!ast_equal(a, c));
    CHECK(ast_hash(a) != ast_hash(c));
}

TEST_CASE("expansion matches the classical product series") {
    // (q;q)_inf = sum of (-1)^k q^(k(3k-1)/2): exponents 0,1,2,5,7,12 below 13.
    QSeries expected(Exponent(13));
    expected.add_term(Exponent(0), Coeff(1));
    expected.add_term(Exponent(1), Coeff(-1));
    expected.add_term(Exponent(2), Coeff(-1));
    expected.add_term(Exponent(5), Coeff(1));
    expected.add_term(Exponent(7), Coeff(1));
    expected.add_term(Exponent(12), Coeff(-1));
    QSeries jm1 = evaluate(parse_expression("Jm(1)"), Exponent(13));
    CHECK(compare_at(jm1, expected, Exponent(13)).verified());
}

TEST_CASE("catalog equation verifies through the full pipeline") {
    RunConfig cfg;
    cfg.order = Exponent(100);
    cfg.use_cache = false;
    Equation eq = parse_equation(
        "builtin(andrews114_lhs) == 2 - c2*q^1*guniv(-q^1; q^8) - J(1,2)*Jbar(3,8)/Jm(2)");
    EquationReport rep = verify_equation(eq, cfg);
    CHECK(rep.report.verified());
    CHECK(rep.report.checked_to >= Exponent(100));
    CHECK(rep.identity.find("builtin(andrews114_lhs)") == 0);
}

TEST_CASE("engine failures carry the failing source position") {
    // thetaNP(1,1; -q^3, q^1) sends a divisor theta to zero.
    try {
        evaluate(parse_expression("q^1 + thetaNP(1, 1; -q^3, q^1)"), Exponent(10));
        FAIL("expected TaggedEngineError");
    } catch (const TaggedEngineError& e) {
        CHECK(e.kind() == ErrorKind::NonGenericSpecialization);
        CHECK(e.line() == 1);
        CHECK(e.column() == 7);
    }

    // An unknown builtin name is caught at evaluation time, not parse time.
    try {
        evaluate(parse_expression("builtin(no_such_series)"), Exponent(10));
        FAIL("expected TaggedEngineError");
    } catch (const TaggedEngineError& e) {
        CHECK(e.kind() == ErrorKind::UnknownBuiltin);
        CHECK(e.column() == 1);
    }

    // Dividing by an identically zero series can never certify a horizon.
    try {
        evaluate(parse_expression("Jm(1)/(q^1 - q^1)"), Exponent(10));
        FAIL("expected TaggedEngineError");
    } catch (const TaggedEngineError& e) {
        CHECK(e.kind() == ErrorKind::InsufficientPrecision);
    }
}

TEST_CASE("runner keeps input order at any width") {
    const std::string text =
        "# three mixed equations\n"
        "builtin(slater39_lhs) == Jbar(3,8)/Jm(2)\n"
        "\n"
        "(1 + q^1)^2 == 1 + c2*q^1 + q^2\n"
        "j(-q^1; q^2) == Jbar(1,2)\n";
    RunConfig cfg;
    cfg.order = Exponent(40);
    cfg.use_cache = false;

    auto serial = run_verify_text(text, cfg);
    REQUIRE(serial.size() == 3);
    CHECK(all_verified(serial));
    CHECK(serial[0].identity.find("builtin(slater39_lhs)") == 0);
    CHECK(serial[1].identity.find("(1 + q^1)^2") == 0);
    CHECK(serial[2].identity.find("j(-q^1; q^2)") == 0);

    RunConfig wide = cfg;
    wide.jobs = 4;
    auto parallel = run_verify_text(text, wide);
    CHECK(strip_elapsed(reports_to_json(serial)) == strip_elapsed(reports_to_json(parallel)));

    std::string line = report_to_text(serial[1]);
    CHECK(line.find("ok") == 0);
    CHECK(line.find(serial[1].identity) != std::string::npos);
}

TEST_CASE("cache reuse never changes a report") {
    TempDir tmp;
    RunConfig cached;
    cached.order = Exponent(30);
    cached.cache_dir = tmp.path.string();
    RunConfig uncached = cached;
    uncached.use_cache = false;

    const std::string text =
        "J(1,5)*J(4,5) == J(2,5)*J(3,5) * (J(1,5)*J(4,5)) / (J(2,5)*J(3,5))\n"
        "Jbar(1,3)^2 == Jbar(1,3)*Jbar(1,3)\n";
    auto plain = run_verify_text(text, uncached);
    auto cold = run_verify_text(text, cached);
    auto warm = run_verify_text(text, cached);
    CHECK(all_verified(plain));
    CHECK(strip_elapsed(reports_to_json(cold)) == strip_elapsed(reports_to_json(plain)));
    CHECK(strip_elapsed(reports_to_json(warm)) == strip_elapsed(reports_to_json(cold)));

    // The warm run was served from disk: four sides at one order each.
    std::size_t entries = 0;
    for (const auto& entry : fs::directory_iterator(tmp.path))
        entries += entry.path().extension() == ".json";
    CHECK(entries == 4);
}

TEST_CASE("mismatches pinpoint the first divergent exponent") {
    RunConfig cfg;
    cfg.order = Exponent(12);
    cfg.use_cache = false;
    auto reports = run_verify_text("1 + q^3 == 1 + q^3 + c2*q^7", cfg);
    REQUIRE(reports.size() == 1);
    CHECK(!all_verified(reports));
    const VerificationReport& rep = reports[0].report;
    CHECK(rep.status == VerifyStatus::Mismatch);
    REQUIRE(rep.first_mismatch.has_value());
    CHECK(rep.first_mismatch->exp == Exponent(7));
    CHECK(rep.first_mismatch->lhs == Coeff(0));
    CHECK(rep.first_mismatch->rhs == Coeff(2));

    std::string line = report_to_text(reports[0]);
    CHECK(line.find("MISMATCH") == 0);
    CHECK(line.find("q^7") != std::string::npos);

    std::string json = reports_to_json(reports);
    CHECK(json.find("\"status\": \"Mismatch\"") != std::string::npos);
    CHECK(json.find("\"exponent\"") != std::string::npos);
}

TEST_CASE("parse failures report the input line, skipping blanks and comments") {
    std::vector<std::string> lines = {"Jm(1) == Jm(1)", "", "# note", "J(2,) == 1"};
    RunConfig cfg;
    cfg.order = Exponent(10);
    cfg.use_cache = false;
    try {
        run_verify_lines(lines, cfg);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);
        CHECK(e.column() == 5);
    }
}

TEST_CASE("engine failures abort a batch after all workers finish") {
    std::vector<std::string> lines = {
        "thetaNP(1, 1; -q^3, q^1) == 0",
        "Jm(1) == Jm(1)",
    };
    RunConfig cfg;
    cfg.order = Exponent(10);
    cfg.use_cache = false;
    cfg.jobs = 2;
    CHECK_THROWS_AS(run_verify_lines(lines, cfg), TaggedEngineError);
}

TEST_CASE("run configs reject impossible settings") {
    RunConfig cfg;
    cfg.order = Exponent(0);
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg.order = Exponent(-3);
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg.order = Exponent(5);
    cfg.jobs = 0;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg.jobs = 1;
    CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("verification runs from a file") {
    TempDir tmp;
    fs::create_directories(tmp.path);
    fs::path file = tmp.path / "identities.idn";
    {
        std::ofstream out(file);
        out << "# small catalog slice\n"
            << "builtin(andrews114_lhs) == builtin(andrews114_rhs)\n"
            << "f(1, 2, 1; q^1, q^1) == gsum(1, 2, 1; q^1, q^1) + thetaNP(1, 1; q^1, q^1)\n";
    }
    RunConfig cfg;
    cfg.order = Exponent(25);
    cfg.use_cache = false;
    auto reports = run_verify_file(file.string(), cfg);
    REQUIRE(reports.size() == 2);
    CHECK(all_verified(reports));

    CHECK_THROWS_AS(run_verify_file((tmp.path / "missing.idn").string(), cfg),
                    std::runtime_error);
}

TEST_CASE("series cache stores, reloads, and clears") {
    TempDir tmp;
    SeriesCache cache(tmp.path);
    CHECK(cache.directory() == tmp.path);

    QSeries s(Exponent(9, 2));
    s.add_term(Exponent(-1, 2), Coeff(3, 7));
    s.add_term(Exponent(2), Coeff(-11));
    cache.store(42, s.precision(), s);

    auto hit = cache.load(42, Exponent(9, 2));
    REQUIRE(hit.has_value());
    CHECK(hit->precision() == s.precision());
    CHECK(hit->terms() == s.terms());

    CHECK(!cache.load(42, Exponent(5)).has_value());  // same key, other order
    CHECK(!cache.load(43, Exponent(9, 2)).has_value());

    // A corrupt entry is a miss, not an error.
    for (const auto& entry : fs::directory_iterator(tmp.path)) {
        std::ofstream out(entry.path(), std::ios::trunc);
        out << "not json";
    }
    CHECK(!cache.load(42, Exponent(9, 2)).has_value());

    cache.store(42, s.precision(), s);
    cache.store(43, s.precision(), s);
    CHECK(cache.clear() == 2);
    CHECK(!cache.load(42, Exponent(9, 2)).has_value());
}

TEST_CASE("cache directory resolution honors the environment override") {
    TempDir tmp;
    const char* previous = std::getenv("HECKMORT_CACHE_DIR");
    std::string saved = previous ? previous : "";
    setenv("HECKMORT_CACHE_DIR", tmp.path.c_str(), 1);
    CHECK(SeriesCache::default_directory() == tmp.path);
    CHECK(SeriesCache().directory() == tmp.path);
    if (previous)
        setenv("HECKMORT_CACHE_DIR", saved.c_str(), 1);
    else
        unsetenv("HECKMORT_CACHE_DIR");
}

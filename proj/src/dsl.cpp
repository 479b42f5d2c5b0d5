#include "heckmort/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <utility>

#include "heckmort/appell.hpp"
#include "heckmort/eulerian.hpp"
#include "heckmort/hecke.hpp"
#include "heckmort/master.hpp"
#include "heckmort/theta.hpp"

namespace heckmort {

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

}  // namespace

ParseError::ParseError(const std::string& message, int line, int column,
                       std::vector<std::string> expected)
    : std::runtime_error(message + " at line " + std::to_string(line) + ", column " +
                         std::to_string(column) +
                         (expected.empty() ? std::string()
                                           : " (expected " + join(expected, " or ") + ")")),
      reason_(message),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

TaggedEngineError::TaggedEngineError(const EngineError& base, int line, int column)
    : EngineError(base.kind(), std::string(base.what()) + " (line " + std::to_string(line) +
                                   ", column " + std::to_string(column) + ")"),
      line_(line),
      column_(column) {}

namespace {

enum class Tok { Number, Name, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, Semi, EqEq, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int column;
};

const char* tok_label(Tok k) {
    switch (k) {
        case Tok::Number: return "integer";
        case Tok::Name: return "name";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Star: return "'*'";
        case Tok::Slash: return "'/'";
        case Tok::Caret: return "'^'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Comma: return "','";
        case Tok::Semi: return "';'";
        case Tok::EqEq: return "'=='";
        case Tok::End: return "end of input";
    }
    return "token";
}

std::vector<Token> lex(const std::string& text) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (text[i + k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        i += n;
    };
    while (i < text.size()) {
        char ch = text[i];
        if (ch == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch))) {
            advance(1);
            continue;
        }
        int tl = line, tc = col;
        if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            out.push_back({Tok::Number, text.substr(i, j - i), tl, tc});
            advance(j - i);
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            // A 'c' glued to a digit is the monomial coefficient marker, not
            // the start of a name.
            if (ch == 'c' && i + 1 < text.size() &&
                std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
                out.push_back({Tok::Name, "c", tl, tc});
                advance(1);
                continue;
            }
            std::size_t j = i;
            while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                       text[j] == '_'))
                ++j;
            out.push_back({Tok::Name, text.substr(i, j - i), tl, tc});
            advance(j - i);
            continue;
        }
        switch (ch) {
            case '+': out.push_back({Tok::Plus, "+", tl, tc}); advance(1); continue;
            case '-': out.push_back({Tok::Minus, "-", tl, tc}); advance(1); continue;
            case '*': out.push_back({Tok::Star, "*", tl, tc}); advance(1); continue;
            case '/': out.push_back({Tok::Slash, "/", tl, tc}); advance(1); continue;
            case '^': out.push_back({Tok::Caret, "^", tl, tc}); advance(1); continue;
            case '(': out.push_back({Tok::LParen, "(", tl, tc}); advance(1); continue;
            case ')': out.push_back({Tok::RParen, ")", tl, tc}); advance(1); continue;
            case ',': out.push_back({Tok::Comma, ",", tl, tc}); advance(1); continue;
            case ';': out.push_back({Tok::Semi, ";", tl, tc}); advance(1); continue;
            case '=':
                if (i + 1 < text.size() && text[i + 1] == '=') {
                    out.push_back({Tok::EqEq, "==", tl, tc});
                    advance(2);
                    continue;
                }
                throw ParseError("unexpected '='", tl, tc, {"'=='"});
            default:
                throw ParseError(std::string("unexpected character '") + ch + "'", tl, tc, {});
        }
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

// Argument layout per function: groups are ';'-separated, items within a
// group ','-separated. 'i' integer, 'm' monomial, 'n' bare series name.
using Signature = std::vector<std::vector<char>>;

const std::map<std::string, Signature>& signatures() {
    static const std::map<std::string, Signature> table = {
        {"J", {{'i', 'i'}}},
        {"Jbar", {{'i', 'i'}}},
        {"Jm", {{'i'}}},
        {"j", {{'m'}, {'m'}}},
        {"AL", {{'m'}, {'m'}, {'m'}}},
        {"f", {{'i', 'i', 'i'}, {'m', 'm'}}},
        {"gsum", {{'i', 'i', 'i'}, {'m', 'm'}}},
        {"thetaNP", {{'i', 'i'}, {'m', 'm'}}},
        {"guniv", {{'m'}, {'m'}}},
        {"builtin", {{'n'}}},
    };
    return table;
}

std::vector<std::string> function_names() {
    std::vector<std::string> names;
    for (const auto& [name, sig] : signatures()) names.push_back(name);
    return names;
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    AstPtr expression() {
        AstPtr e = parse_expr();
        expect_end();
        return e;
    }

    Equation equation() {
        AstPtr l = parse_expr();
        expect(Tok::EqEq);
        AstPtr r = parse_expr();
        expect_end();
        return {l, r};
    }

    SignedMonomial monomial() {
        SignedMonomial m = parse_mono();
        expect_end();
        return m;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& peek(std::size_t k = 0) const {
        std::size_t idx = std::min(pos_ + k, toks_.size() - 1);
        return toks_[idx];
    }
    bool at(Tok k, std::size_t ahead = 0) const { return peek(ahead).kind == k; }
    Token take() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

    [[noreturn]] void fail(const Token& t, const std::string& msg,
                           std::vector<std::string> expected) const {
        throw ParseError(msg, t.line, t.column, std::move(expected));
    }

    Token expect(Tok k) {
        if (!at(k))
            fail(peek(), std::string("expected ") + tok_label(k), {tok_label(k)});
        return take();
    }

    void expect_end() {
        if (!at(Tok::End)) fail(peek(), "unexpected trailing input", {"end of input"});
    }

    std::int64_t to_int64(const Token& t) const {
        try {
            return std::stoll(t.text);
        } catch (const std::out_of_range&) {
            fail(t, "integer literal out of range", {"integer"});
        } catch (const std::invalid_argument&) {
            fail(t, "malformed integer literal", {"integer"});
        }
    }

    std::int64_t parse_signed_integer() {
        bool neg = false;
        if (at(Tok::Minus)) {
            take();
            neg = true;
        }
        if (!at(Tok::Number)) fail(peek(), "expected integer", {"integer"});
        std::int64_t v = to_int64(take());
        return neg ? -v : v;
    }

    // Unsigned rational literal as an exact value; arbitrarily large parts.
    Coeff parse_rational_coeff() {
        if (!at(Tok::Number)) fail(peek(), "expected rational", {"rational"});
        Token num = take();
        mpz_class n(num.text);
        mpz_class d(1);
        if (at(Tok::Slash) && at(Tok::Number, 1)) {
            take();
            Token den = take();
            d = mpz_class(den.text);
            if (d == 0) fail(den, "zero denominator", {"nonzero integer"});
        }
        Coeff r(n, d);
        r.canonicalize();
        return r;
    }

    Exponent parse_signed_rat64() {
        bool neg = false;
        if (at(Tok::Minus)) {
            take();
            neg = true;
        }
        if (!at(Tok::Number)) fail(peek(), "expected rational", {"rational"});
        Token num = take();
        std::int64_t n = to_int64(num);
        std::int64_t d = 1;
        if (at(Tok::Slash) && at(Tok::Number, 1)) {
            take();
            Token den = take();
            d = to_int64(den);
            if (d == 0) fail(den, "zero denominator", {"nonzero integer"});
        }
        return Exponent(neg ? -n : n, d);
    }

    SignedMonomial parse_mono() {
        Token first = peek();
        bool neg = false;
        if (at(Tok::Minus)) {
            take();
            neg = true;
        }
        Coeff coeff(1);
        if (at(Tok::Name) && peek().text == "c") {
            take();
            coeff = parse_rational_coeff();
            expect(Tok::Star);
        }
        if (!(at(Tok::Name) && peek().text == "q"))
            fail(peek(), "expected 'q'", {"'q'"});
        take();
        expect(Tok::Caret);
        Exponent e = parse_signed_rat64();
        if (neg) coeff = -coeff;
        if (coeff == 0)
            fail(first, "monomial coefficient must be nonzero", {"nonzero rational"});
        return SignedMonomial(coeff, e);
    }

    AstPtr make(AstNode&& n) { return std::make_shared<const AstNode>(std::move(n)); }

    AstPtr parse_expr() {
        AstPtr node = parse_term();
        while (at(Tok::Plus) || at(Tok::Minus)) {
            Token op = take();
            AstPtr rhs = parse_term();
            AstNode n;
            n.kind = op.kind == Tok::Plus ? AstKind::Add : AstKind::Subtract;
            n.line = op.line;
            n.column = op.column;
            n.lhs = node;
            n.rhs = rhs;
            node = make(std::move(n));
        }
        return node;
    }

    AstPtr parse_term() {
        AstPtr node = parse_factor();
        while (at(Tok::Star) || at(Tok::Slash)) {
            Token op = take();
            AstPtr rhs = parse_factor();
            AstNode n;
            n.kind = op.kind == Tok::Star ? AstKind::Multiply : AstKind::Divide;
            n.line = op.line;
            n.column = op.column;
            n.lhs = node;
            n.rhs = rhs;
            node = make(std::move(n));
        }
        return node;
    }

    AstPtr parse_factor() {
        AstPtr a = parse_atom();
        if (at(Tok::Caret)) {
            Token op = take();
            std::int64_t e = parse_signed_integer();
            AstNode n;
            n.kind = AstKind::Power;
            n.line = op.line;
            n.column = op.column;
            n.lhs = a;
            n.power = e;
            return make(std::move(n));
        }
        return a;
    }

    AstPtr parse_atom() {
        const Token& t = peek();
        if (t.kind == Tok::Number) {
            AstNode n;
            n.kind = AstKind::Rational;
            n.line = t.line;
            n.column = t.column;
            n.value = parse_rational_coeff();
            return make(std::move(n));
        }
        bool mono_start =
            t.kind == Tok::Minus ||
            (t.kind == Tok::Name && t.text == "q" && at(Tok::Caret, 1)) ||
            (t.kind == Tok::Name && t.text == "c");
        if (mono_start) {
            AstNode n;
            n.kind = AstKind::Monomial;
            n.line = t.line;
            n.column = t.column;
            n.mono = parse_mono();
            return make(std::move(n));
        }
        if (t.kind == Tok::Name) return parse_call();
        if (t.kind == Tok::LParen) {
            take();
            AstPtr inner = parse_expr();
            expect(Tok::RParen);
            return inner;
        }
        fail(t, "expected an expression", {"rational", "monomial", "function call", "'('"});
    }

    AstPtr parse_call() {
        Token nameTok = take();
        auto it = signatures().find(nameTok.text);
        if (it == signatures().end())
            fail(nameTok, "unknown function '" + nameTok.text + "'", function_names());
        expect(Tok::LParen);
        AstNode n;
        n.kind = AstKind::Call;
        n.line = nameTok.line;
        n.column = nameTok.column;
        n.name = nameTok.text;
        const Signature& sig = it->second;
        for (std::size_t gi = 0; gi < sig.size(); ++gi) {
            if (gi) expect(Tok::Semi);
            for (std::size_t ai = 0; ai < sig[gi].size(); ++ai) {
                if (ai) expect(Tok::Comma);
                switch (sig[gi][ai]) {
                    case 'i': n.ints.push_back(parse_signed_integer()); break;
                    case 'm': n.monos.push_back(parse_mono()); break;
                    case 'n':
                        if (!at(Tok::Name)) fail(peek(), "expected a series name", {"name"});
                        n.builtin = take().text;
                        break;
                }
            }
        }
        expect(Tok::RParen);
        return make(std::move(n));
    }
};

std::string rat64_str(const Exponent& r) {
    std::string s = std::to_string(r.num());
    if (r.den() != 1) s += "/" + std::to_string(r.den());
    return s;
}

std::string mono_str(const SignedMonomial& m) {
    std::string s;
    Coeff c = m.coeff;
    if (c < 0) {
        s += "-";
        c = -c;
    }
    if (c != 1) s += "c" + c.get_str() + "*";
    s += "q^" + rat64_str(m.exp);
    return s;
}

bool is_atom_node(const AstNode& n) {
    return n.kind == AstKind::Rational || n.kind == AstKind::Monomial ||
           n.kind == AstKind::Call;
}

std::string print_node(const AstNode& n);

std::string print_wrapped(const AstPtr& p) {
    return is_atom_node(*p) ? print_node(*p) : "(" + print_node(*p) + ")";
}

std::string print_call(const AstNode& n) {
    const Signature& sig = signatures().at(n.name);
    std::string out = n.name + "(";
    std::size_t ii = 0, mi = 0;
    for (std::size_t gi = 0; gi < sig.size(); ++gi) {
        if (gi) out += "; ";
        for (std::size_t ai = 0; ai < sig[gi].size(); ++ai) {
            if (ai) out += ", ";
            switch (sig[gi][ai]) {
                case 'i': out += std::to_string(n.ints[ii++]); break;
                case 'm': out += mono_str(n.monos[mi++]); break;
                case 'n': out += n.builtin; break;
            }
        }
    }
    return out + ")";
}

std::string print_node(const AstNode& n) {
    switch (n.kind) {
        case AstKind::Rational: return n.value.get_str();
        case AstKind::Monomial: return mono_str(n.mono);
        case AstKind::Add: return print_wrapped(n.lhs) + " + " + print_wrapped(n.rhs);
        case AstKind::Subtract: return print_wrapped(n.lhs) + " - " + print_wrapped(n.rhs);
        case AstKind::Multiply: return print_wrapped(n.lhs) + "*" + print_wrapped(n.rhs);
        case AstKind::Divide: return print_wrapped(n.lhs) + "/(" + print_node(*n.rhs) + ")";
        case AstKind::Power: return print_wrapped(n.lhs) + "^" + std::to_string(n.power);
        case AstKind::Call: return print_call(n);
    }
    return "";
}

QSeries eval_node(const AstNode& n, Exponent p);

QSeries eval_call(const AstNode& n, Exponent p) {
    if (n.name == "J") return J(n.ints[0], n.ints[1], JKind::Plain, p);
    if (n.name == "Jbar") return J(n.ints[0], n.ints[1], JKind::Bar, p);
    if (n.name == "Jm") return J(0, n.ints[0], JKind::Eta, p);
    if (n.name == "j") return theta_j(n.monos[0], n.monos[1], p);
    if (n.name == "AL") return appell_m(AppellSpec{n.monos[0], n.monos[1], n.monos[2]}, p);
    if (n.name == "f")
        return f_abc(HeckeParams{n.ints[0], n.ints[1], n.ints[2]}, n.monos[0], n.monos[1], p);
    if (n.name == "gsum")
        return g_abc(HeckeParams{n.ints[0], n.ints[1], n.ints[2]}, n.monos[0], n.monos[1], p);
    if (n.name == "thetaNP")
        return theta_np(MasterParams{n.ints[0], n.ints[1]},
                        Specialization{n.monos[0], n.monos[1]}, p);
    if (n.name == "guniv") return g_universal(n.monos[0], n.monos[1], p);
    if (n.name == "builtin") return builtin_series(n.builtin, p);
    throw std::logic_error("eval_call: unhandled function " + n.name);
}

QSeries eval_node(const AstNode& n, Exponent p) {
    try {
        switch (n.kind) {
            case AstKind::Rational: return QSeries::constant(n.value, p);
            case AstKind::Monomial: return QSeries::monomial(n.mono, p);
            case AstKind::Add: return eval_node(*n.lhs, p) + eval_node(*n.rhs, p);
            case AstKind::Subtract: return eval_node(*n.lhs, p) - eval_node(*n.rhs, p);
            case AstKind::Multiply: return mul(eval_node(*n.lhs, p), eval_node(*n.rhs, p));
            case AstKind::Divide:
                return mul(eval_node(*n.lhs, p), invert(eval_node(*n.rhs, p)));
            case AstKind::Power: return pow_int(eval_node(*n.lhs, p), n.power);
            case AstKind::Call: return eval_call(n, p);
        }
    } catch (const TaggedEngineError&) {
        throw;  // keep the innermost position
    } catch (const EngineError& e) {
        throw TaggedEngineError(e, n.line, n.column);
    }
    throw std::logic_error("eval_node: unhandled node kind");
}

}  // namespace

AstPtr parse_expression(const std::string& text) { return Parser(lex(text)).expression(); }

Equation parse_equation(const std::string& text) { return Parser(lex(text)).equation(); }

SignedMonomial parse_monomial(const std::string& text) { return Parser(lex(text)).monomial(); }

std::string print_expression(const AstPtr& node) {
    if (!node) throw std::invalid_argument("print_expression: null node");
    return print_node(*node);
}

std::string print_equation(const Equation& eq) {
    return print_expression(eq.lhs) + " == " + print_expression(eq.rhs);
}

bool ast_equal(const AstPtr& a, const AstPtr& b) {
    return print_expression(a) == print_expression(b);
}

static std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t ast_hash(const AstPtr& node) { return fnv1a(print_expression(node)); }

std::uint64_t equation_hash(const Equation& eq) { return fnv1a(print_equation(eq)); }

QSeries evaluate(const AstPtr& node, Exponent order) {
    if (!node) throw std::invalid_argument("evaluate: null node");
    return with_precision_target(order, [&](Exponent w) { return eval_node(*node, w); });
}

}  // namespace heckmort

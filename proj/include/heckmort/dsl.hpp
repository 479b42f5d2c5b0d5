#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "heckmort/errors.hpp"
#include "heckmort/qseries.hpp"

namespace heckmort {

/// Syntax error with 1-based source coordinates and the token classes the
/// parser would have accepted at the failing position.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, int line, int column,
               std::vector<std::string> expected);

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

    /// The bare description, without the position suffix what() carries.
    const std::string& reason() const noexcept { return reason_; }

private:
    std::string reason_;
    int line_;
    int column_;
    std::vector<std::string> expected_;
};

enum class AstKind { Rational, Monomial, Add, Subtract, Multiply, Divide, Power, Call };

struct AstNode;
using AstPtr = std::shared_ptr<const AstNode>;

/// One expression node. Which fields are meaningful depends on `kind`:
/// Rational uses `value`; Monomial uses `mono`; the four binary operators use
/// `lhs`/`rhs`; Power uses `lhs` and `power`; Call uses `name` plus the
/// argument vectors (`ints`, `monos`, and `builtin` for the series-name
/// argument of builtin()).
struct AstNode {
    AstKind kind = AstKind::Rational;
    int line = 0;
    int column = 0;

    Coeff value = Coeff(0);
    SignedMonomial mono{Coeff(1), Exponent(0)};

    AstPtr lhs;
    AstPtr rhs;
    std::int64_t power = 0;

    std::string name;
    std::vector<std::int64_t> ints;
    std::vector<SignedMonomial> monos;
    std::string builtin;
};

struct Equation {
    AstPtr lhs;
    AstPtr rhs;
};

/// Grammar (whitespace-insensitive; '#' starts a comment running to
/// end of line):
///
///   equation := expr '==' expr
///   expr     := term (('+' | '-') term)*
///   term     := factor (('*' | '/') factor)*
///   factor   := atom ('^' integer)?
///   atom     := rational | mono | call | '(' expr ')'
///   mono     := ['-'] ['c' rational '*'] 'q' '^' ['-'] rational
///   rational := integer ['/' integer]
///   call     := name '(' group (';' group)* ')'
///   group    := arg (',' arg)*
///
/// A '/' directly between two integer literals binds as a rational literal,
/// so 2/3^2 means (2/3)^2; write 2/(3)^2 for the quotient. Function names,
/// arities, and argument kinds are fixed:
///
///   J(a, m)   Jbar(a, m)   Jm(m)          -- integer parameters
///   j(mono; mono)                         -- theta argument; base
///   AL(mono; mono; mono)                  -- Appell x; base; z
///   f(a, b, c; mono, mono)                -- double-sum shape; x, y
///   gsum(a, b, c; mono, mono)             -- Appell assembly; x, y
///   thetaNP(n, p; mono, mono)             -- correction term; x, y
///   guniv(mono; mono)                     -- universal mock theta g(x, b)
///   builtin(name)                         -- catalog series by name
AstPtr parse_expression(const std::string& text);
Equation parse_equation(const std::string& text);

/// Parses a standalone monomial literal (the CLI's --x/--y argument syntax).
SignedMonomial parse_monomial(const std::string& text);

/// Canonical form: one space around '+' and '-', none around '*', '/', '^';
/// every non-atomic operand parenthesized; the right side of '/' always
/// parenthesized; arguments joined with ", " and groups with "; ". Parsing a
/// canonical print reproduces the same tree for any expression the grammar
/// can denote.
std::string print_expression(const AstPtr& node);
std::string print_equation(const Equation& eq);

bool ast_equal(const AstPtr& a, const AstPtr& b);

/// FNV-1a over the canonical print, so structurally equal expressions agree
/// and formatting differences in the source never matter.
std::uint64_t ast_hash(const AstPtr& node);
std::uint64_t equation_hash(const Equation& eq);

/// Engine failure annotated with the source position of the innermost node
/// whose evaluation raised it.
class TaggedEngineError : public EngineError {
public:
    TaggedEngineError(const EngineError& base, int line, int column);

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Expands the expression to the given order: the result's certified
/// precision is at least `order`. Engine errors escape as TaggedEngineError.
QSeries evaluate(const AstPtr& node, Exponent order);

}  // namespace heckmort

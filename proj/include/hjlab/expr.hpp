#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "hjlab/hamiltonian.hpp"

namespace hjlab {

/// Parse failure report: where, what was expected, what was found.
struct ParseDiagnostic {
    std::size_t offset = 0;
    std::string expected;
    std::string found;

    std::string render() const {
        return "parse error at offset " + std::to_string(offset) + ": expected " + expected +
               ", found " + found;
    }
};

struct ExprNode;
using ExprPtr = std::unique_ptr<ExprNode>;

/// Immutable expression tree for H(x,p,u). Variables are x1,x2,p1,p2,u;
/// `pi` is folded into a literal by the parser.
struct ExprNode {
    enum class Kind { number, variable, negate, binary, call };
    enum class Var { x1, x2, p1, p2, u };

    Kind kind;
    std::size_t offset = 0;  // byte offset in the source text
    double number = 0.0;     // Kind::number
    Var var = Var::u;        // Kind::variable
    char op = 0;             // Kind::binary: one of + - * / ^
    std::string callee;      // Kind::call
    std::vector<ExprPtr> args;
};

struct ExprAst {
    ExprPtr root;
    int dim = 1;
};

using ParseResult = std::variant<ExprAst, ParseDiagnostic>;

/// Total parser for the expression grammar; never throws on bad input.
ParseResult parse_expression(const std::string& source, int dim);

/// Strict evaluation; throws EvalError (with the node offset) on division by
/// zero, sqrt/pow domain violations, or non-finite intermediate results.
double evaluate(const ExprAst& ast, const Coord& x, const Coord& p, double u);

/// Canonical fully-parenthesized rendering; parse(pretty_print(a)) is
/// structurally identical to a.
std::string pretty_print(const ExprAst& ast);

bool structurally_equal(const ExprAst& a, const ExprAst& b);

/// Wrap a parsed expression as a HamiltonianSpec. Metadata flags come from the
/// caller (config); the u-monotonicity flag is spot checked when asserted.
HamiltonianSpec make_expression_hamiltonian(const std::string& source, int dim,
                                            const HamiltonianSpec& metadata);

}  // namespace hjlab

#include "hjlab/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>

namespace hjlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kMaxDepth = 256;

struct Token {
    enum class Type { number, ident, op, lparen, rparen, comma, end, bad };
    Type type = Type::end;
    std::size_t offset = 0;
    double number = 0.0;
    std::string text;
};

std::string describe(const Token& t) {
    switch (t.type) {
        case Token::Type::number: return "number '" + t.text + "'";
        case Token::Type::ident: return "identifier '" + t.text + "'";
        case Token::Type::op: return "'" + t.text + "'";
        case Token::Type::lparen: return "'('";
        case Token::Type::rparen: return "')'";
        case Token::Type::comma: return "','";
        case Token::Type::end: return "end of input";
        case Token::Type::bad: return "invalid character '" + t.text + "'";
    }
    return "?";
}

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        Token t;
        t.offset = pos_;
        if (pos_ >= src_.size()) return t;
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
            return lex_number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                          src_[pos_] == '_'))
                ++pos_;
            t.type = Token::Type::ident;
            t.text = src_.substr(start, pos_ - start);
            return t;
        }
        ++pos_;
        switch (c) {
            case '+': case '-': case '*': case '/': case '^':
                t.type = Token::Type::op;
                t.text = std::string(1, c);
                return t;
            case '(': t.type = Token::Type::lparen; t.text = "("; return t;
            case ')': t.type = Token::Type::rparen; t.text = ")"; return t;
            case ',': t.type = Token::Type::comma; t.text = ","; return t;
            default:
                t.type = Token::Type::bad;
                t.text = std::string(1, c);
                return t;
        }
    }

private:
    Token lex_number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark;  // bare 'e' is not an exponent
            }
        }
        Token t;
        t.type = Token::Type::number;
        t.offset = start;
        t.text = src_.substr(start, pos_ - start);
        t.number = std::strtod(t.text.c_str(), nullptr);
        return t;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
};

const std::map<std::string, int>& function_arity() {
    static const std::map<std::string, int> table = {
        {"sin", 1}, {"cos", 1}, {"atan", 1}, {"abs", 1}, {"sqrt", 1},
        {"exp", 1}, {"min", 2}, {"max", 2},  {"pow", 2},
    };
    return table;
}

class Parser {
public:
    Parser(const std::string& src, int dim) : lexer_(src), dim_(dim) { advance(); }

    ParseResult run() {
        ExprPtr root = parse_expr(0);
        if (!root) return *diag_;
        if (cur_.type != Token::Type::end) {
            fail("end of input", cur_);
            return *diag_;
        }
        ExprAst ast;
        ast.root = std::move(root);
        ast.dim = dim_;
        return ast;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    void fail(const std::string& expected, const Token& found) {
        if (!diag_) diag_ = ParseDiagnostic{found.offset, expected, describe(found)};
    }

    ExprPtr parse_expr(int depth) {
        if (depth > kMaxDepth) {
            fail("a shallower expression (nesting limit)", cur_);
            return nullptr;
        }
        ExprPtr lhs = parse_term(depth + 1);
        if (!lhs) return nullptr;
        while (cur_.type == Token::Type::op && (cur_.text == "+" || cur_.text == "-")) {
            Token op = cur_;
            advance();
            ExprPtr rhs = parse_term(depth + 1);
            if (!rhs) return nullptr;
            lhs = make_binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    ExprPtr parse_term(int depth) {
        if (depth > kMaxDepth) {
            fail("a shallower expression (nesting limit)", cur_);
            return nullptr;
        }
        ExprPtr lhs = parse_factor(depth + 1);
        if (!lhs) return nullptr;
        while (cur_.type == Token::Type::op && (cur_.text == "*" || cur_.text == "/")) {
            Token op = cur_;
            advance();
            ExprPtr rhs = parse_factor(depth + 1);
            if (!rhs) return nullptr;
            lhs = make_binary(op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    // factor := unary ('^' factor)?   -- right-associative power
    ExprPtr parse_factor(int depth) {
        if (depth > kMaxDepth) {
            fail("a shallower expression (nesting limit)", cur_);
            return nullptr;
        }
        ExprPtr base = parse_unary(depth + 1);
        if (!base) return nullptr;
        if (cur_.type == Token::Type::op && cur_.text == "^") {
            Token op = cur_;
            advance();
            ExprPtr exponent = parse_factor(depth + 1);
            if (!exponent) return nullptr;
            return make_binary(op, std::move(base), std::move(exponent));
        }
        return base;
    }

    ExprPtr parse_unary(int depth) {
        if (depth > kMaxDepth) {
            fail("a shallower expression (nesting limit)", cur_);
            return nullptr;
        }
        if (cur_.type == Token::Type::op && cur_.text == "-") {
            Token op = cur_;
            advance();
            ExprPtr inner = parse_unary(depth + 1);
            if (!inner) return nullptr;
            auto node = std::make_unique<ExprNode>();
            node->kind = ExprNode::Kind::negate;
            node->offset = op.offset;
            node->args.push_back(std::move(inner));
            return node;
        }
        return parse_primary(depth + 1);
    }

    ExprPtr parse_primary(int depth) {
        if (cur_.type == Token::Type::number) {
            auto node = std::make_unique<ExprNode>();
            node->kind = ExprNode::Kind::number;
            node->offset = cur_.offset;
            node->number = cur_.number;
            advance();
            return node;
        }
        if (cur_.type == Token::Type::ident) return parse_ident(depth);
        if (cur_.type == Token::Type::lparen) {
            advance();
            ExprPtr inner = parse_expr(depth + 1);
            if (!inner) return nullptr;
            if (cur_.type != Token::Type::rparen) {
                fail("')'", cur_);
                return nullptr;
            }
            advance();
            return inner;
        }
        fail("a number, identifier or '('", cur_);
        return nullptr;
    }

    ExprPtr parse_ident(int depth) {
        const Token name = cur_;
        advance();
        const auto& fns = function_arity();
        auto fn = fns.find(name.text);
        if (cur_.type == Token::Type::lparen) {
            if (fn == fns.end()) {
                fail("a known function (sin, cos, atan, abs, sqrt, exp, min, max, pow)", name);
                return nullptr;
            }
            advance();
            auto node = std::make_unique<ExprNode>();
            node->kind = ExprNode::Kind::call;
            node->offset = name.offset;
            node->callee = name.text;
            while (true) {
                ExprPtr arg = parse_expr(depth + 1);
                if (!arg) return nullptr;
                node->args.push_back(std::move(arg));
                if (cur_.type == Token::Type::comma) {
                    advance();
                    continue;
                }
                break;
            }
            if (cur_.type != Token::Type::rparen) {
                fail("')' or ','", cur_);
                return nullptr;
            }
            advance();
            if (static_cast<int>(node->args.size()) != fn->second) {
                fail(name.text + " with " + std::to_string(fn->second) + " argument(s)", name);
                return nullptr;
            }
            return node;
        }
        if (fn != fns.end()) {
            fail("'(' after function name", cur_);
            return nullptr;
        }
        if (name.text == "pi") {
            auto node = std::make_unique<ExprNode>();
            node->kind = ExprNode::Kind::number;
            node->offset = name.offset;
            node->number = kPi;
            return node;
        }
        ExprNode::Var v;
        if (name.text == "u") v = ExprNode::Var::u;
        else if (name.text == "x1") v = ExprNode::Var::x1;
        else if (name.text == "p1") v = ExprNode::Var::p1;
        else if (name.text == "x2") v = ExprNode::Var::x2;
        else if (name.text == "p2") v = ExprNode::Var::p2;
        else {
            fail("a variable (x1..x" + std::to_string(dim_) + ", p1..p" + std::to_string(dim_) +
                     ", u), 'pi', or a function",
                 name);
            return nullptr;
        }
        if (dim_ < 2 && (v == ExprNode::Var::x2 || v == ExprNode::Var::p2)) {
            fail("a variable valid for dim=1 (x1, p1, u)", name);
            return nullptr;
        }
        auto node = std::make_unique<ExprNode>();
        node->kind = ExprNode::Kind::variable;
        node->offset = name.offset;
        node->var = v;
        return node;
    }

    static ExprPtr make_binary(const Token& op, ExprPtr l, ExprPtr r) {
        auto node = std::make_unique<ExprNode>();
        node->kind = ExprNode::Kind::binary;
        node->offset = op.offset;
        node->op = op.text[0];
        node->args.push_back(std::move(l));
        node->args.push_back(std::move(r));
        return node;
    }

    Lexer lexer_;
    int dim_;
    Token cur_;
    std::optional<ParseDiagnostic> diag_;
};

double eval_node(const ExprNode& n, const Coord& x, const Coord& p, double u) {
    switch (n.kind) {
        case ExprNode::Kind::number:
            return n.number;
        case ExprNode::Kind::variable:
            switch (n.var) {
                case ExprNode::Var::x1: return x[0];
                case ExprNode::Var::x2: return x[1];
                case ExprNode::Var::p1: return p[0];
                case ExprNode::Var::p2: return p[1];
                case ExprNode::Var::u: return u;
            }
            break;
        case ExprNode::Kind::negate:
            return -eval_node(*n.args[0], x, p, u);
        case ExprNode::Kind::binary: {
            const double a = eval_node(*n.args[0], x, p, u);
            const double b = eval_node(*n.args[1], x, p, u);
            double r = 0.0;
            switch (n.op) {
                case '+': r = a + b; break;
                case '-': r = a - b; break;
                case '*': r = a * b; break;
                case '/':
                    if (b == 0.0) throw EvalError(n.offset, "division by zero");
                    r = a / b;
                    break;
                case '^':
                    r = std::pow(a, b);
                    break;
            }
            if (!std::isfinite(r))
                throw EvalError(n.offset, std::string("non-finite result of '") + n.op + "'");
            return r;
        }
        case ExprNode::Kind::call: {
            const double a = eval_node(*n.args[0], x, p, u);
            double r = 0.0;
            if (n.callee == "sin") r = std::sin(a);
            else if (n.callee == "cos") r = std::cos(a);
            else if (n.callee == "atan") r = std::atan(a);
            else if (n.callee == "abs") r = std::fabs(a);
            else if (n.callee == "exp") r = std::exp(a);
            else if (n.callee == "sqrt") {
                if (a < 0.0) throw EvalError(n.offset, "sqrt of a negative value");
                r = std::sqrt(a);
            } else {
                const double b = eval_node(*n.args[1], x, p, u);
                if (n.callee == "min") r = std::min(a, b);
                else if (n.callee == "max") r = std::max(a, b);
                else r = std::pow(a, b);
            }
            if (!std::isfinite(r))
                throw EvalError(n.offset, "non-finite result of " + n.callee);
            return r;
        }
    }
    throw EvalError(n.offset, "malformed expression node");
}

void print_node(const ExprNode& n, std::string& out) {
    switch (n.kind) {
        case ExprNode::Kind::number: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n.number);
            out += buf;
            return;
        }
        case ExprNode::Kind::variable:
            switch (n.var) {
                case ExprNode::Var::x1: out += "x1"; return;
                case ExprNode::Var::x2: out += "x2"; return;
                case ExprNode::Var::p1: out += "p1"; return;
                case ExprNode::Var::p2: out += "p2"; return;
                case ExprNode::Var::u: out += "u"; return;
            }
            return;
        case ExprNode::Kind::negate:
            out += "(-";
            print_node(*n.args[0], out);
            out += ")";
            return;
        case ExprNode::Kind::binary:
            out += "(";
            print_node(*n.args[0], out);
            out += " ";
            out += n.op;
            out += " ";
            print_node(*n.args[1], out);
            out += ")";
            return;
        case ExprNode::Kind::call:
            out += n.callee;
            out += "(";
            for (std::size_t i = 0; i < n.args.size(); ++i) {
                if (i) out += ", ";
                print_node(*n.args[i], out);
            }
            out += ")";
            return;
    }
}

bool equal_node(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprNode::Kind::number: return a.number == b.number;
        case ExprNode::Kind::variable: return a.var == b.var;
        case ExprNode::Kind::negate: return equal_node(*a.args[0], *b.args[0]);
        case ExprNode::Kind::binary:
            return a.op == b.op && equal_node(*a.args[0], *b.args[0]) &&
                   equal_node(*a.args[1], *b.args[1]);
        case ExprNode::Kind::call:
            if (a.callee != b.callee || a.args.size() != b.args.size()) return false;
            for (std::size_t i = 0; i < a.args.size(); ++i)
                if (!equal_node(*a.args[i], *b.args[i])) return false;
            return true;
    }
    return false;
}

}  // namespace

ParseResult parse_expression(const std::string& source, int dim) {
    if (source.empty()) return ParseDiagnostic{0, "a nonempty expression", "empty input"};
    if (dim != 1 && dim != 2) return ParseDiagnostic{0, "dim of 1 or 2", "dim=" + std::to_string(dim)};
    return Parser(source, dim).run();
}

double evaluate(const ExprAst& ast, const Coord& x, const Coord& p, double u) {
    return eval_node(*ast.root, x, p, u);
}

std::string pretty_print(const ExprAst& ast) {
    std::string out;
    print_node(*ast.root, out);
    return out;
}

bool structurally_equal(const ExprAst& a, const ExprAst& b) {
    return a.dim == b.dim && equal_node(*a.root, *b.root);
}

HamiltonianSpec make_expression_hamiltonian(const std::string& source, int dim,
                                            const HamiltonianSpec& metadata) {
    ParseResult res = parse_expression(source, dim);
    if (auto* diag = std::get_if<ParseDiagnostic>(&res))
        throw ConfigError("hamiltonian.expr: " + diag->render());
    auto ast = std::make_shared<ExprAst>(std::move(std::get<ExprAst>(res)));
    HamiltonianSpec h = metadata;
    h.kind = "expr";
    h.dim = dim;
    h.eval = [ast](const Coord& x, const Coord& p, double u) { return evaluate(*ast, x, p, u); };
    return h;
}

}  // namespace hjlab

#include "tsvar/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>

namespace tsvar {
namespace detail {

enum class Op {
    Literal, VarT, VarU,
    Add, Sub, Mul, Div, Pow,
    Neg,
    Sin, Cos, Exp, Log, Abs, Sqrt,
};

struct ExprNode {
    Op op;
    double value = 0.0;  // Literal only
    std::shared_ptr<const ExprNode> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr lit(double v) {
    auto n = std::make_shared<ExprNode>();
    n->op = Op::Literal;
    n->value = v;
    return n;
}

bool is_lit(const NodePtr& n, double* v = nullptr) {
    if (n->op != Op::Literal) return false;
    if (v) *v = n->value;
    return true;
}

bool is_lit_value(const NodePtr& n, double want) {
    return n->op == Op::Literal && n->value == want;
}

// --- smart constructors with constant folding -------------------------------

NodePtr neg(NodePtr x) {
    double v;
    if (is_lit(x, &v)) return lit(-v);
    if (x->op == Op::Neg) return x->a;
    return make(Op::Neg, std::move(x));
}

NodePtr add(NodePtr x, NodePtr y) {
    double a, b;
    if (is_lit(x, &a) && is_lit(y, &b)) return lit(a + b);
    if (is_lit_value(x, 0.0)) return y;
    if (is_lit_value(y, 0.0)) return x;
    return make(Op::Add, std::move(x), std::move(y));
}

NodePtr sub(NodePtr x, NodePtr y) {
    double a, b;
    if (is_lit(x, &a) && is_lit(y, &b)) return lit(a - b);
    if (is_lit_value(y, 0.0)) return x;
    if (is_lit_value(x, 0.0)) return neg(std::move(y));
    return make(Op::Sub, std::move(x), std::move(y));
}

NodePtr mul(NodePtr x, NodePtr y) {
    double a, b;
    if (is_lit(x, &a) && is_lit(y, &b)) return lit(a * b);
    if (is_lit_value(x, 0.0) || is_lit_value(y, 0.0)) return lit(0.0);
    if (is_lit_value(x, 1.0)) return y;
    if (is_lit_value(y, 1.0)) return x;
    return make(Op::Mul, std::move(x), std::move(y));
}

NodePtr divide(NodePtr x, NodePtr y) {
    double a, b;
    if (is_lit(x, &a) && is_lit(y, &b) && b != 0.0) return lit(a / b);
    if (is_lit_value(y, 1.0)) return x;
    if (is_lit_value(x, 0.0) && !is_lit_value(y, 0.0)) return lit(0.0);
    return make(Op::Div, std::move(x), std::move(y));
}

NodePtr pow_node(NodePtr x, NodePtr y) {
    if (is_lit_value(y, 1.0)) return x;
    if (is_lit_value(y, 0.0)) return lit(1.0);
    return make(Op::Pow, std::move(x), std::move(y));
}

// --- parser -----------------------------------------------------------------

struct Parser {
    std::string_view src;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos])))
            ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < src.size() && src[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }

    [[noreturn]] void fail(const std::string& msg) {
        throw SyntaxError(msg + " at offset " + std::to_string(pos), pos);
    }

    NodePtr parse_expr() {
        NodePtr left = parse_term();
        for (;;) {
            if (eat('+'))
                left = make(Op::Add, std::move(left), parse_term());
            else if (eat('-'))
                left = make(Op::Sub, std::move(left), parse_term());
            else
                return left;
        }
    }

    NodePtr parse_term() {
        NodePtr left = parse_unary();
        for (;;) {
            if (eat('*'))
                left = make(Op::Mul, std::move(left), parse_unary());
            else if (eat('/'))
                left = make(Op::Div, std::move(left), parse_unary());
            else
                return left;
        }
    }

    NodePtr parse_unary() {
        if (eat('-')) {
            NodePtr inner = parse_unary();
            // fold -literal into a negative literal so printing round-trips
            double v;
            if (is_lit(inner, &v)) return lit(-v);
            return make(Op::Neg, std::move(inner));
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (eat('^')) {
            // exponent parses as unary: right-associative, allows u^-2
            return make(Op::Pow, std::move(base), parse_unary());
        }
        return base;
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos >= src.size()) fail("unexpected end of expression");
        const char c = src[pos];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        if (c == '(') {
            ++pos;
            NodePtr inner = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        // strtod needs NUL termination, which a string_view slice lacks.
        const std::string buf(src.substr(pos, 512));
        char* end = nullptr;
        const double v = std::strtod(buf.c_str(), &end);
        if (end == buf.c_str()) fail("invalid number");
        // strtod accepts inf/nan spellings only via identifiers, which we do
        // not route here, so v is a plain finite literal.
        pos += static_cast<std::size_t>(end - buf.c_str());
        return lit(v);
    }

    NodePtr parse_identifier() {
        const std::size_t start = pos;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
            ++pos;
        const std::string name(src.substr(start, pos - start));
        if (name == "t") return make(Op::VarT);
        if (name == "u") return make(Op::VarU);

        Op op;
        if (name == "sin") op = Op::Sin;
        else if (name == "cos") op = Op::Cos;
        else if (name == "exp") op = Op::Exp;
        else if (name == "log") op = Op::Log;
        else if (name == "abs") op = Op::Abs;
        else if (name == "sqrt") op = Op::Sqrt;
        else
            throw UnknownIdentifier("unknown identifier '" + name + "' at offset " +
                                        std::to_string(start),
                                    name);
        if (!eat('(')) fail("expected '(' after function name '" + name + "'");
        NodePtr arg = parse_expr();
        if (!eat(')')) fail("expected ')'");
        return make(op, std::move(arg));
    }
};

// --- evaluation -------------------------------------------------------------

[[noreturn]] void domain_error(const std::string& what) {
    throw EvalError(what, EvalError::Kind::DomainViolation);
}

double check_finite(double v, const char* what) {
    if (!std::isfinite(v))
        throw EvalError(std::string("non-finite result in ") + what,
                        EvalError::Kind::NonFinite);
    return v;
}

double eval_node(const ExprNode& n, double t, double u) {
    switch (n.op) {
        case Op::Literal: return n.value;
        case Op::VarT: return t;
        case Op::VarU: return u;
        case Op::Add: return check_finite(eval_node(*n.a, t, u) + eval_node(*n.b, t, u), "+");
        case Op::Sub: return check_finite(eval_node(*n.a, t, u) - eval_node(*n.b, t, u), "-");
        case Op::Mul: return check_finite(eval_node(*n.a, t, u) * eval_node(*n.b, t, u), "*");
        case Op::Div: {
            const double num = eval_node(*n.a, t, u);
            const double den = eval_node(*n.b, t, u);
            return check_finite(num / den, "/");
        }
        case Op::Pow: {
            const double base = eval_node(*n.a, t, u);
            const double expo = eval_node(*n.b, t, u);
            if (base < 0.0 && std::nearbyint(expo) != expo)
                domain_error("negative base with non-integer exponent in '^'");
            if (base == 0.0 && expo < 0.0)
                domain_error("zero base with negative exponent in '^'");
            return check_finite(std::pow(base, expo), "^");
        }
        case Op::Neg: return -eval_node(*n.a, t, u);
        case Op::Sin: return std::sin(eval_node(*n.a, t, u));
        case Op::Cos: return std::cos(eval_node(*n.a, t, u));
        case Op::Exp: return check_finite(std::exp(eval_node(*n.a, t, u)), "exp");
        case Op::Log: {
            const double x = eval_node(*n.a, t, u);
            if (x <= 0.0) domain_error("log of non-positive value");
            return check_finite(std::log(x), "log");
        }
        case Op::Abs: return std::fabs(eval_node(*n.a, t, u));
        case Op::Sqrt: {
            const double x = eval_node(*n.a, t, u);
            if (x < 0.0) domain_error("sqrt of negative value");
            return std::sqrt(x);
        }
    }
    domain_error("corrupt expression node");
}

// --- differentiation --------------------------------------------------------

NodePtr diff(const NodePtr& n) {
    switch (n->op) {
        case Op::Literal:
        case Op::VarT: return lit(0.0);
        case Op::VarU: return lit(1.0);
        case Op::Add: return add(diff(n->a), diff(n->b));
        case Op::Sub: return sub(diff(n->a), diff(n->b));
        case Op::Mul: return add(mul(diff(n->a), n->b), mul(n->a, diff(n->b)));
        case Op::Div:
            return divide(sub(mul(diff(n->a), n->b), mul(n->a, diff(n->b))),
                          pow_node(n->b, lit(2.0)));
        case Op::Pow: {
            double c;
            if (!is_lit(n->b, &c))
                throw NotDifferentiable(
                    "cannot differentiate '^' with a non-literal exponent");
            return mul(mul(lit(c), pow_node(n->a, lit(c - 1.0))), diff(n->a));
        }
        case Op::Neg: return neg(diff(n->a));
        case Op::Sin: return mul(make(Op::Cos, n->a), diff(n->a));
        case Op::Cos: return neg(mul(make(Op::Sin, n->a), diff(n->a)));
        case Op::Exp: return mul(make(Op::Exp, n->a), diff(n->a));
        case Op::Log: return divide(diff(n->a), n->a);
        case Op::Sqrt:
            return divide(diff(n->a), mul(lit(2.0), make(Op::Sqrt, n->a)));
        case Op::Abs:
            throw NotDifferentiable("cannot differentiate abs(...)");
    }
    throw NotDifferentiable("corrupt expression node");
}

// --- printing ---------------------------------------------------------------

// Precedence levels used for parenthesization:
//   1 add/sub, 2 mul/div, 3 unary minus (and negative literals), 4 pow, 5 atom
int prec(const ExprNode& n) {
    switch (n.op) {
        case Op::Add:
        case Op::Sub: return 1;
        case Op::Mul:
        case Op::Div: return 2;
        case Op::Neg: return 3;
        case Op::Pow: return 4;
        case Op::Literal: return n.value < 0.0 ? 3 : 5;
        default: return 5;
    }
}

void print_node(const ExprNode& n, int ctx, std::string& out) {
    const int p = prec(n);
    const bool parens = p < ctx;
    if (parens) out += '(';
    switch (n.op) {
        case Op::Literal: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n.value);
            out += buf;
            break;
        }
        case Op::VarT: out += 't'; break;
        case Op::VarU: out += 'u'; break;
        case Op::Add:
            print_node(*n.a, 1, out);
            out += " + ";
            print_node(*n.b, 2, out);
            break;
        case Op::Sub:
            print_node(*n.a, 1, out);
            out += " - ";
            print_node(*n.b, 2, out);
            break;
        case Op::Mul:
            print_node(*n.a, 2, out);
            out += '*';
            print_node(*n.b, 3, out);
            break;
        case Op::Div:
            print_node(*n.a, 2, out);
            out += '/';
            print_node(*n.b, 3, out);
            break;
        case Op::Neg:
            out += '-';
            print_node(*n.a, 4, out);
            break;
        case Op::Pow:
            print_node(*n.a, 5, out);
            out += '^';
            print_node(*n.b, 4, out);
            break;
        case Op::Sin: out += "sin("; print_node(*n.a, 1, out); out += ')'; break;
        case Op::Cos: out += "cos("; print_node(*n.a, 1, out); out += ')'; break;
        case Op::Exp: out += "exp("; print_node(*n.a, 1, out); out += ')'; break;
        case Op::Log: out += "log("; print_node(*n.a, 1, out); out += ')'; break;
        case Op::Abs: out += "abs("; print_node(*n.a, 1, out); out += ')'; break;
        case Op::Sqrt: out += "sqrt("; print_node(*n.a, 1, out); out += ')'; break;
    }
    if (parens) out += ')';
}

bool same_node(const ExprNode& x, const ExprNode& y) {
    if (x.op != y.op) return false;
    if (x.op == Op::Literal) return x.value == y.value;
    if (bool(x.a) != bool(y.a) || bool(x.b) != bool(y.b)) return false;
    if (x.a && !same_node(*x.a, *y.a)) return false;
    if (x.b && !same_node(*x.b, *y.b)) return false;
    return true;
}

bool mentions_u(const ExprNode& n) {
    if (n.op == Op::VarU) return true;
    if (n.a && mentions_u(*n.a)) return true;
    if (n.b && mentions_u(*n.b)) return true;
    return false;
}

}  // namespace
}  // namespace detail

Expr Expr::parse(std::string_view src) {
    detail::Parser p{src};
    auto root = p.parse_expr();
    p.skip_ws();
    if (p.pos != src.size()) p.fail("trailing characters");
    return Expr(std::move(root));
}

Expr Expr::literal(double value) { return Expr(detail::lit(value)); }

double Expr::eval(double t, double u) const {
    if (!root_) throw Error("evaluating an empty expression");
    return detail::eval_node(*root_, t, u);
}

Expr Expr::diff_u() const {
    if (!root_) throw Error("differentiating an empty expression");
    return Expr(detail::diff(root_));
}

std::string Expr::str() const {
    if (!root_) return "";
    std::string out;
    detail::print_node(*root_, 0, out);
    return out;
}

bool Expr::same(const Expr& other) const {
    if (!root_ || !other.root_) return root_ == other.root_;
    return detail::same_node(*root_, *other.root_);
}

bool Expr::is_literal(double* value) const {
    return root_ && detail::is_lit(root_, value);
}

bool Expr::independent_of_u() const {
    return root_ && !detail::mentions_u(*root_);
}

}  // namespace tsvar

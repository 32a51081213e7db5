#pragma once

// Small expression language for right-hand sides and impulse functions.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ['^' unary]          (right-associative)
//   atom   := number | 't' | 'u' | name '(' expr ')' | '(' expr ')'
//
// '^' binds tighter than unary minus, so -u^2 is -(u^2). Functions:
// sin cos exp log abs sqrt.

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "tsvar/error.hpp"

namespace tsvar {

struct SyntaxError : Error {
    std::size_t position;  // byte offset into the source string
    SyntaxError(const std::string& what, std::size_t pos)
        : Error(what), position(pos) {}
};

struct UnknownIdentifier : Error {
    std::string name;
    UnknownIdentifier(const std::string& what, std::string id)
        : Error(what), name(std::move(id)) {}
};

struct EvalError : Error {
    enum class Kind { DomainViolation, NonFinite };
    Kind kind;
    EvalError(const std::string& what, Kind k) : Error(what), kind(k) {}
};

struct NotDifferentiable : Error {
    using Error::Error;
};

namespace detail {
struct ExprNode;
}

/// Immutable expression in the variables t and u.
class Expr {
public:
    Expr() = default;  // empty; only assignable

    static Expr parse(std::string_view src);
    static Expr literal(double value);

    bool empty() const { return root_ == nullptr; }

    /// Evaluate at (t, u). Throws EvalError on domain violations and
    /// non-finite results.
    double eval(double t, double u) const;

    /// Symbolic derivative with respect to u (with basic constant folding).
    /// Throws NotDifferentiable for abs(...) and for '^' with a non-literal
    /// exponent.
    Expr diff_u() const;

    /// Render in parseable form: parse(str()) has the same tree.
    std::string str() const;

    /// Structural equality of trees.
    bool same(const Expr& other) const;

    /// True if the expression is a bare numeric literal (value stored in
    /// *value when non-null).
    bool is_literal(double* value = nullptr) const;

    /// True if the expression does not mention the variable u.
    bool independent_of_u() const;

private:
    explicit Expr(std::shared_ptr<const detail::ExprNode> root)
        : root_(std::move(root)) {}
    std::shared_ptr<const detail::ExprNode> root_;
};

}  // namespace tsvar

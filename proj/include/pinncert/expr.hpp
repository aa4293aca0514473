#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "pinncert/errors.hpp"

namespace pinncert {

/// Parameter name -> value map used when evaluating expressions.
using Bindings = std::map<std::string, double>;

namespace detail {
struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;
}  // namespace detail

// Immutable arithmetic expression over the variable `x` and named scalar
// parameters. Supports +, -, *, /, ^ (nonnegative integer exponents), unary
// minus and the functions sin, cos, exp. Values are IEEE doubles; `pi` is a
// built-in constant. Expressions are safe to share across threads.
class Expr {
public:
    Expr();  // the constant 0

    static Expr number(double v);
    static Expr variable();
    static Expr parameter(const std::string& name);

    /// Evaluate at x with the given parameter bindings.
    /// Throws EvalError on division by zero or an unbound parameter.
    double eval(double x, const Bindings& bindings = {}) const;

    /// Exact symbolic derivative with respect to x; parameters are constants.
    Expr diff() const;

    /// Substitute parameter values and fold constant subtrees. The result
    /// depends only on x and evaluates faster; used on hot paths.
    Expr bind(const Bindings& bindings) const;

    /// Parseable text form (round-trips through parse()).
    std::string str() const;

    /// S-expression dump of the tree, e.g. "(neg (* k x))". For tests.
    std::string dump() const;

    /// True if the expression contains no variable and no parameters.
    bool is_constant() const;

    Expr operator+(const Expr& rhs) const;
    Expr operator-(const Expr& rhs) const;
    Expr operator*(const Expr& rhs) const;
    Expr operator-() const;

private:
    explicit Expr(detail::NodePtr node);
    detail::NodePtr node_;
    friend Expr parse(std::string_view, const std::set<std::string>&);
};

/// Parse expression text. Every identifier must be `x`, `pi`, sin/cos/exp or
/// a declared parameter name; anything else is a ParseError with byte offset.
Expr parse(std::string_view source, const std::set<std::string>& params = {});

}  // namespace pinncert

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fracpicard {

enum class NodeKind { Number, Time, Var, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Function { Sin, Cos, Exp, Log, Abs, Sqrt, Erfc };

struct ExprNode;
using ExprNodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    NodeKind kind = NodeKind::Number;
    double number = 0.0;       // Number
    std::size_t var_index = 0;  // Var: 0-based, z1 -> 0
    Function function = Function::Sin;  // Call
    ExprNodePtr lhs;            // unary operand / call argument / left operand
    ExprNodePtr rhs;            // right operand of binary nodes
    std::size_t position = 0;   // byte offset in the source text
};

/// Parsed right-hand side f(t, z1, ..., zm).
///
/// Grammar, loosest binding first:
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' unary)?          right-associative
///   primary := number | 't' | 'z'k | 'y' | name '(' expr ')' | '(' expr ')'
/// Functions: sin cos exp log abs sqrt erfc.
class RhsExpr {
public:
    RhsExpr(ExprNodePtr root, std::size_t arity) : root_(std::move(root)), arity_(arity) {}

    const ExprNode& root() const noexcept { return *root_; }
    std::size_t arity() const noexcept { return arity_; }

    /// Fully parenthesized infix text; parse_rhs(to_string()) reproduces the tree.
    std::string to_string() const;
    /// Constructor-style dump, e.g. Add(Pow(t,2),Mul(0.5,z1)).
    std::string to_sexpr() const;
    /// True when the expression references no zk.
    bool is_state_free() const;

    friend bool operator==(const RhsExpr& a, const RhsExpr& b);

private:
    ExprNodePtr root_;
    std::size_t arity_;
};

struct ParseOptions {
    /// 0-based z index that the identifier `y` aliases (the order-0 slot), if any.
    std::optional<std::size_t> y_alias;
};

/// Throws ParseError on syntax errors, unknown identifiers (including zk with
/// k > m) and wrong function arity.
RhsExpr parse_rhs(std::string_view text, std::size_t m, const ParseOptions& options = {});

/// Throws EvalError on log/sqrt of negative numbers, division by zero, poles
/// of ^ and negative bases raised to non-integer powers.
double eval_rhs(const RhsExpr& expr, double t, std::span<const double> z);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Empirical Lipschitz constant of f in z w.r.t. the l1 norm:
/// max |f(t,z) - f(t,z')| / ||z - z'||_1 over random pairs in the box, plus
/// coordinate-axis pairs at several step sizes. A lower bound on the true
/// constant. Deterministic for a given seed.
double estimate_lipschitz(const RhsExpr& expr, Interval t_range, std::span<const Interval> z_box,
                          std::size_t samples, std::uint64_t seed = 0x5eed);

}  // namespace fracpicard

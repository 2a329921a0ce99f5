#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracpicard/errors.hpp"
#include "fracpicard/rhs_expr.hpp"

namespace fracpicard {

/// Unvalidated problem description, as read from a config file:
///   ᶜD^α y = f(t, ᶜD^{α_1} y, ..., ᶜD^{α_m} y),  y^{(j)}(0) = b_j,  j < n.
struct ProblemSpec {
    double alpha = 1.0;
    std::vector<double> derivative_orders;
    std::vector<double> initial_values;
    double horizon = 1.0;
    double gamma = 0.0;
    std::string rhs;
    /// Closed-form solution y(t), used as the error oracle in study mode.
    std::optional<std::string> exact;
};

/// The conditions a problem can violate.
enum class Condition {
    PrincipalOrder,     // α > 0
    OrderChain,         // α > α_1 > ... > α_m >= 0
    InitialValueCount,  // exactly n = ⌈α⌉ initial values
    WeightRange,        // 0 <= γ < α - n + 1
    InnerCeiling,       // n > n_1 for non-integral α
    Horizon,            // T > 0
    Rhs,                // f parses against the declared z1..zm
};

std::string_view condition_name(Condition c);

struct ValidationIssue {
    Condition condition;
    std::string message;
};

enum class ProblemRoute {
    IntegerOrder,  // α = n: y = Taylor + I^n f
    Fractional,    // n - 1 < α < n: y = Taylor + I^α f
};

struct ValidationResult;
ValidationResult validate_problem(const ProblemSpec& spec);

/// A problem that passed validate_problem(). Immutable.
class MultiTermProblem {
public:
    double alpha() const noexcept { return alpha_; }
    const std::vector<double>& derivative_orders() const noexcept { return orders_; }
    const std::vector<double>& initial_values() const noexcept { return initial_values_; }
    double horizon() const noexcept { return horizon_; }
    double gamma() const noexcept { return gamma_; }
    const RhsExpr& rhs() const noexcept { return rhs_; }

    std::size_t m() const noexcept { return orders_.size(); }
    /// n with n - 1 < α <= n.
    std::size_t n() const noexcept { return initial_values_.size(); }
    /// n_h = ⌈α_h⌉ for the h-th inner order (0-based).
    std::size_t inner_ceiling(std::size_t h) const;
    ProblemRoute route() const noexcept { return route_; }

private:
    friend ValidationResult validate_problem(const ProblemSpec& spec);

    MultiTermProblem(double alpha, std::vector<double> orders, std::vector<double> initial_values,
                     double horizon, double gamma, RhsExpr rhs, ProblemRoute route)
        : alpha_(alpha), orders_(std::move(orders)), initial_values_(std::move(initial_values)),
          horizon_(horizon), gamma_(gamma), rhs_(std::move(rhs)), route_(route) {}

    double alpha_;
    std::vector<double> orders_;
    std::vector<double> initial_values_;
    double horizon_;
    double gamma_;
    RhsExpr rhs_;
    ProblemRoute route_;
};

struct ValidationResult {
    std::optional<MultiTermProblem> problem;
    std::vector<ValidationIssue> issues;

    bool ok() const noexcept { return problem.has_value(); }
    bool has(Condition c) const noexcept;
};

/// Checks every condition independently and reports each violation.
ValidationResult validate_problem(const ProblemSpec& spec);

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<ValidationIssue> issues);
    const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

private:
    std::vector<ValidationIssue> issues_;
};

/// validate_problem() that throws ValidationError on failure.
MultiTermProblem make_problem(const ProblemSpec& spec);

}  // namespace fracpicard

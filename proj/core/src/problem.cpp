#include "fracpicard/problem.hpp"

#include <cmath>
#include <sstream>

#include "fracpicard/fractional_ops.hpp"

namespace fracpicard {
namespace {

std::string fmt(double x) {
    std::ostringstream out;
    out << x;
    return out.str();
}

}  // namespace

std::string_view condition_name(Condition c) {
    switch (c) {
        case Condition::PrincipalOrder: return "principal-order";
        case Condition::OrderChain: return "order-chain";
        case Condition::InitialValueCount: return "initial-value-count";
        case Condition::WeightRange: return "weight-range";
        case Condition::InnerCeiling: return "inner-ceiling";
        case Condition::Horizon: return "horizon";
        case Condition::Rhs: return "rhs";
    }
    return "unknown";
}

std::size_t MultiTermProblem::inner_ceiling(std::size_t h) const {
    return order_ceiling(orders_.at(h));
}

bool ValidationResult::has(Condition c) const noexcept {
    for (const auto& issue : issues) {
        if (issue.condition == c) return true;
    }
    return false;
}

ValidationResult validate_problem(const ProblemSpec& spec) {
    ValidationResult result;
    auto report = [&](Condition c, std::string message) {
        result.issues.push_back({c, std::move(message)});
    };

    if (!(spec.horizon > 0.0) || !std::isfinite(spec.horizon)) {
        report(Condition::Horizon, "horizon T = " + fmt(spec.horizon) + " must be positive and finite");
    }

    const bool alpha_ok = spec.alpha > 0.0 && std::isfinite(spec.alpha);
    if (!alpha_ok) {
        report(Condition::PrincipalOrder, "principal order alpha = " + fmt(spec.alpha) + " must be positive");
    }

    const auto& orders = spec.derivative_orders;
    for (std::size_t h = 0; h < orders.size(); ++h) {
        const double a = orders[h];
        const std::string label = "alpha_" + std::to_string(h + 1) + " = " + fmt(a);
        if (!std::isfinite(a) || a < 0.0) {
            report(Condition::OrderChain, "order chain violated: " + label + " must be finite and >= 0");
            continue;
        }
        if (h == 0) {
            if (alpha_ok && !(a < spec.alpha)) {
                report(Condition::OrderChain, "order chain violated: " + label +
                                                  " must be below alpha = " + fmt(spec.alpha));
            }
        } else if (!(a < orders[h - 1])) {
            report(Condition::OrderChain, "order chain violated: " + label +
                                              " must be below alpha_" + std::to_string(h) + " = " +
                                              fmt(orders[h - 1]));
        }
    }

    std::size_t n = 0;
    if (alpha_ok) {
        n = order_ceiling(spec.alpha);
        if (spec.initial_values.size() != n) {
            report(Condition::InitialValueCount,
                   "initial-value count: alpha = " + fmt(spec.alpha) + " needs n = " +
                       std::to_string(n) + " initial values b_0..b_" + std::to_string(n - 1) +
                       ", got " + std::to_string(spec.initial_values.size()));
        }
        const double upper = spec.alpha - static_cast<double>(n) + 1.0;
        if (!(spec.gamma >= 0.0 && spec.gamma < upper)) {
            report(Condition::WeightRange, "weight exponent gamma = " + fmt(spec.gamma) +
                                               " must satisfy 0 <= gamma < alpha - n + 1 = " +
                                               fmt(upper));
        }
        if (!is_integral_order(spec.alpha) && !orders.empty() && std::isfinite(orders[0]) &&
            orders[0] >= 0.0) {
            const std::size_t n1 = order_ceiling(orders[0]);
            if (!(n > n1)) {
                report(Condition::InnerCeiling,
                       "inner ceiling: n = " + std::to_string(n) + " must exceed n_1 = " +
                           std::to_string(n1) + " (alpha_1 = " + fmt(orders[0]) + ")");
            }
        }
    }
    for (double b : spec.initial_values) {
        if (!std::isfinite(b)) {
            report(Condition::InitialValueCount, "initial values must be finite");
            break;
        }
    }

    std::optional<RhsExpr> rhs;
    try {
        ParseOptions options;
        if (!orders.empty() && orders.back() == 0.0) options.y_alias = orders.size() - 1;
        rhs = parse_rhs(spec.rhs, orders.size(), options);
    } catch (const ParseError& e) {
        report(Condition::Rhs, std::string("rhs: ") + e.what());
    }

    if (result.issues.empty()) {
        const auto route = is_integral_order(spec.alpha) ? ProblemRoute::IntegerOrder
                                                         : ProblemRoute::Fractional;
        result.problem = MultiTermProblem(spec.alpha, orders, spec.initial_values, spec.horizon,
                                          spec.gamma, std::move(*rhs), route);
    }
    return result;
}

namespace {
std::string join_issues(const std::vector<ValidationIssue>& issues) {
    std::string out = "invalid problem:";
    for (const auto& issue : issues) {
        out += "\n  [" + std::string(condition_name(issue.condition)) + "] " + issue.message;
    }
    return out;
}
}  // namespace

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : Error(join_issues(issues)), issues_(std::move(issues)) {}

MultiTermProblem make_problem(const ProblemSpec& spec) {
    auto result = validate_problem(spec);
    if (!result.ok()) {
        throw ValidationError(std::move(result.issues));
    }
    return std::move(*result.problem);
}

}  // namespace fracpicard

#include "fracpicard/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracpicard/errors.hpp"
#include "fracpicard/fractional_ops.hpp"

namespace fracpicard {
namespace {

double factorial(std::size_t k) {
    double out = 1.0;
    for (std::size_t i = 2; i <= k; ++i) out *= static_cast<double>(i);
    return out;
}

// k! f[t_0, t_s, ..., t_{ks}]
double scaled_divided_difference(const SampledFunction& y, std::size_t k, std::size_t stride) {
    std::vector<double> t(k + 1);
    std::vector<double> v(k + 1);
    for (std::size_t i = 0; i <= k; ++i) {
        t[i] = y.grid().node(i * stride);
        v[i] = y.at(i * stride);
    }
    for (std::size_t level = 1; level <= k; ++level) {
        for (std::size_t i = k; i >= level; --i) {
            v[i] = (v[i] - v[i - 1]) / (t[i] - t[i - level]);
        }
    }
    return factorial(k) * v[k];
}

std::vector<double> sample_state(std::span<const SampledFunction> z, std::size_t node) {
    std::vector<double> out(z.size());
    for (std::size_t h = 0; h < z.size(); ++h) out[h] = z[h].at(node);
    return out;
}

}  // namespace

std::vector<double> estimate_initial_derivatives(const SampledFunction& y, std::size_t count) {
    if (count == 0) return {};
    if (y.is_singular()) {
        throw DomainError("estimate_initial_derivatives: function must be regular");
    }
    if (2 * (count - 1) > y.grid().intervals()) {
        throw DomainError("estimate_initial_derivatives: grid too coarse");
    }
    std::vector<double> out(count);
    out[0] = y.at(0);
    for (std::size_t k = 1; k < count; ++k) {
        const double fine = scaled_divided_difference(y, k, 1);
        const double coarse = scaled_divided_difference(y, k, 2);
        out[k] = 2.0 * fine - coarse;
    }
    return out;
}

ResidualReport check_equivalence(const SolutionTrajectory& sol, const MultiTermProblem& problem) {
    ResidualReport report;
    const auto& grid = sol.grid;
    const std::size_t intervals = grid->intervals();
    const auto t = grid->nodes();
    const auto& b = problem.initial_values();

    // Integral form, with the solver's inner derivatives.
    {
        double worst = 0.0;
        try {
            std::vector<double> f;
            const std::size_t first = problem.gamma() > 0.0 ? 1 : 0;
            for (std::size_t i = first; i < t.size(); ++i) {
                f.push_back(eval_rhs(problem.rhs(), t[i], sample_state(sol.derivatives, i)));
            }
            const SampledFunction fs(grid, std::move(f), problem.gamma());
            const auto integral =
                apply_integral(FracIntegralOperator(problem.alpha(), grid), fs);
            for (std::size_t i = 0; i < t.size(); ++i) {
                const double r = sol.y.at(i) - taylor_value(b, t[i]) - integral.at(i);
                worst = std::max(worst, std::abs(r));
            }
            if (!std::isfinite(worst)) worst = std::numeric_limits<double>::infinity();
        } catch (const Error&) {
            worst = std::numeric_limits<double>::infinity();
        }
        report.volterra_residual = worst;
    }

    // Differential form, every derivative recomputed from y.
    const std::size_t skip = (intervals + 31) / 32;
    report.nodes_skipped = 2 * skip;
    {
        double worst = 0.0;
        try {
            const auto lhs = caputo_derivative(sol.y, problem.alpha(), b);
            std::vector<SampledFunction> z;
            for (std::size_t h = 0; h < problem.m(); ++h) {
                const double ah = problem.derivative_orders()[h];
                if (ah == 0.0) {
                    z.push_back(sol.y);
                } else {
                    const std::size_t nh = order_ceiling(ah);
                    z.push_back(caputo_derivative(sol.y, ah, std::span(b).first(nh)));
                }
            }
            for (std::size_t i = skip; i + skip <= intervals; ++i) {
                const double f = eval_rhs(problem.rhs(), t[i], sample_state(z, i));
                worst = std::max(worst, std::abs(lhs.at(i) - f));
            }
            if (!std::isfinite(worst)) worst = std::numeric_limits<double>::infinity();
        } catch (const Error&) {
            worst = std::numeric_limits<double>::infinity();
        }
        report.ode_residual = worst;
    }

    try {
        const auto est = estimate_initial_derivatives(sol.y, problem.n());
        for (std::size_t k = 0; k < est.size(); ++k) {
            report.ic_errors.push_back(std::abs(est[k] - b[k]));
        }
    } catch (const Error&) {
        report.ic_errors.assign(problem.n(), std::numeric_limits<double>::infinity());
    }
    return report;
}

DecayFit lemma2_decay(double gamma_exp, double alpha, GridPtr grid, double coefficient) {
    if (!(gamma_exp >= 0.0 && gamma_exp < 1.0)) {
        throw DomainError("lemma2_decay: gamma must lie in [0, 1)");
    }
    const auto f = SampledFunction::sample(
        grid, [&](double t) { return coefficient * std::pow(t, -gamma_exp); }, gamma_exp);
    const FracIntegralOperator op(alpha, grid);

    DecayFit fit;
    fit.hypothesis_violated = !(alpha > gamma_exp);

    const double t1 = grid->node(1);
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t i = 1; i < grid->size() && grid->node(i) <= 10.0 * t1 * (1.0 + 1e-12); ++i) {
        const double value = op.evaluate_at(f, i);
        if (i == 1) fit.first_node_value = value;
        xs.push_back(std::log(grid->node(i)));
        ys.push_back(std::log(std::abs(value)));
    }
    if (xs.size() < 2) {
        throw DomainError("lemma2_decay: fewer than two nodes in the first decade");
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    fit.slope = sxy / sxx;
    fit.limit_value = fit.hypothesis_violated ? fit.first_node_value : op.evaluate_at(f, 0);
    return fit;
}

double composition_identity(std::span<const double> poly_coeffs, double alpha, GridPtr grid) {
    if (is_integral_order(alpha)) {
        throw DomainError("composition_identity: alpha must be non-integral");
    }
    if (poly_coeffs.empty() || poly_coeffs.size() > 9) {
        throw DomainError("composition_identity: polynomial degree must be between 0 and 8");
    }
    const std::size_t n = order_ceiling(alpha);
    std::vector<double> b(n, 0.0);
    for (std::size_t k = 0; k < n && k < poly_coeffs.size(); ++k) {
        b[k] = factorial(k) * poly_coeffs[k];
    }
    const auto y = SampledFunction::sample(grid, [&](double t) {
        double acc = 0.0;
        for (std::size_t k = poly_coeffs.size(); k-- > 0;) acc = acc * t + poly_coeffs[k];
        return acc;
    });
    const auto derivative = caputo_derivative(y, alpha, b);
    const auto recovered = apply_integral(FracIntegralOperator(alpha, grid), derivative);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid->size(); ++i) {
        const double reference = y.at(i) - taylor_value(b, grid->node(i));
        worst = std::max(worst, std::abs(recovered.at(i) - reference));
    }
    return worst;
}

InitialLimitReport initial_limit_checks(const MultiTermProblem& problem,
                                        const SolutionTrajectory& sol) {
    InitialLimitReport report;
    const auto& b = problem.initial_values();
    for (std::size_t k = 0; k < problem.n(); ++k) {
        const FracIntegralOperator op(problem.alpha() - static_cast<double>(k), sol.grid);
        report.integral_limits.push_back(std::abs(op.evaluate_at(sol.phi, 1)));
    }
    const auto est = estimate_initial_derivatives(sol.y, problem.n());
    for (std::size_t k = 0; k < est.size(); ++k) {
        report.derivative_errors.push_back(std::abs(est[k] - b[k]));
    }
    return report;
}

}  // namespace fracpicard

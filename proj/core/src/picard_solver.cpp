#include "fracpicard/picard_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fracpicard/errors.hpp"
#include "fracpicard/special_functions.hpp"

namespace fracpicard {
namespace {

double exact_gamma(double x) {
    if (x == std::floor(x) && x >= 1.0 && x <= 30.0) {
        double out = 1.0;
        for (double k = 2.0; k < x; k += 1.0) out *= k;
        return out;
    }
    return gamma(x);
}

SampledFunction evaluate_rhs(const MultiTermProblem& problem, const GridPtr& grid,
                             std::span<const SampledFunction> z) {
    const double gamma_w = problem.gamma();
    const std::size_t first = gamma_w > 0.0 ? 1 : 0;
    const auto t = grid->nodes();
    std::vector<double> zi(problem.m());
    std::vector<double> out;
    out.reserve(t.size() - first);
    for (std::size_t i = first; i < t.size(); ++i) {
        for (std::size_t h = 0; h < zi.size(); ++h) zi[h] = z[h].at(i);
        double value = 0.0;
        try {
            value = eval_rhs(problem.rhs(), t[i], zi);
        } catch (const EvalError& e) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "rhs evaluation failed at t = " << t[i] << ": " << e.what();
            throw EvalError(msg.str(), e.position());
        }
        if (!std::isfinite(value)) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "rhs produced a non-finite value at t = " << t[i];
            throw NumericalError(msg.str());
        }
        out.push_back(value);
    }
    return SampledFunction(grid, std::move(out), gamma_w);
}

std::vector<FracIntegralOperator> inner_operators(const MultiTermProblem& problem,
                                                  const FracIntegralOperator& op_main) {
    std::vector<FracIntegralOperator> ops;
    ops.reserve(problem.m());
    for (double ah : problem.derivative_orders()) {
        if (ah == 0.0) {
            ops.push_back(op_main);
        } else {
            ops.emplace_back(problem.alpha() - ah, op_main.grid_ptr());
        }
    }
    return ops;
}

std::vector<SampledFunction> inner_derivatives(const MultiTermProblem& problem,
                                               const SampledFunction& phi,
                                               std::span<const FracIntegralOperator> ops_h) {
    std::vector<SampledFunction> z;
    z.reserve(problem.m());
    for (std::size_t h = 0; h < problem.m(); ++h) {
        const auto integral = apply_integral(ops_h[h], phi);
        const auto taylor = derivative_taylor_part(problem.initial_values(),
                                                   problem.derivative_orders()[h], phi.grid_ptr());
        std::vector<double> values(integral.values().size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            values[i] = integral.values()[i] + taylor.values()[i];
        }
        z.emplace_back(phi.grid_ptr(), std::move(values));
    }
    return z;
}

}  // namespace

SampledFunction taylor_part(std::span<const double> initial_values, GridPtr grid) {
    if (initial_values.empty()) {
        throw DomainError("taylor_part: at least one initial value is required");
    }
    return SampledFunction::sample(std::move(grid),
                                   [&](double t) { return taylor_value(initial_values, t); });
}

SampledFunction derivative_taylor_part(std::span<const double> initial_values, double alpha_h,
                                       GridPtr grid) {
    const std::size_t n = initial_values.size();
    if (!(alpha_h >= 0.0) || !(alpha_h < static_cast<double>(n))) {
        throw DomainError("derivative_taylor_part: need 0 <= alpha_h < n");
    }
    if (alpha_h == 0.0) {
        return taylor_part(initial_values, std::move(grid));
    }
    const std::size_t nh = order_ceiling(alpha_h);
    std::vector<double> coeffs;
    std::vector<double> powers;
    for (std::size_t j = nh; j < n; ++j) {
        const double p = static_cast<double>(j) - alpha_h;
        coeffs.push_back(initial_values[j] / exact_gamma(p + 1.0));
        powers.push_back(p);
    }
    return SampledFunction::sample(std::move(grid), [&](double t) {
        double acc = 0.0;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            acc += coeffs[i] * (powers[i] == 0.0 ? 1.0 : std::pow(t, powers[i]));
        }
        return acc;
    });
}

PicardState initial_state(const MultiTermProblem& problem, GridPtr grid) {
    std::vector<SampledFunction> z;
    z.reserve(problem.m());
    for (double ah : problem.derivative_orders()) {
        z.push_back(derivative_taylor_part(problem.initial_values(), ah, grid));
    }
    auto phi = evaluate_rhs(problem, grid, z);
    return PicardState{0, std::move(phi), std::move(z), 0.0};
}

PicardState picard_step(const PicardState& state, const MultiTermProblem& problem,
                        const FracIntegralOperator& op_main,
                        std::span<const FracIntegralOperator> ops_h) {
    if (ops_h.size() != problem.m()) {
        throw DomainError("picard_step: one operator per inner derivative is required");
    }
    if (!op_main.grid().same_as(state.phi.grid())) {
        throw GridMismatchError("picard_step: operator grid differs from the state grid");
    }
    auto z = inner_derivatives(problem, state.phi, ops_h);
    auto phi = evaluate_rhs(problem, state.phi.grid_ptr(), z);
    const double delta = weighted_norm(phi - state.phi, problem.gamma());
    if (!std::isfinite(delta)) {
        throw NumericalError("picard_step: iterate difference is not finite");
    }
    return PicardState{state.iteration + 1, std::move(phi), std::move(z), delta};
}

double estimate_contraction(double lipschitz, const MultiTermProblem& problem, double t_eff) {
    if (!(lipschitz >= 0.0)) {
        throw DomainError("estimate_contraction: Lipschitz constant must be non-negative");
    }
    if (!(t_eff > 0.0) || t_eff > problem.horizon() * (1.0 + 1e-12)) {
        throw DomainError("estimate_contraction: T_eff must lie in (0, T]");
    }
    double sum = 0.0;
    for (double ah : problem.derivative_orders()) {
        const double p = problem.alpha() - ah;
        sum += std::pow(t_eff, p) / gamma(p + 1.0);
    }
    return lipschitz * sum;
}

SolutionTrajectory solve(const MultiTermProblem& problem, GridPtr grid,
                         const SolveOptions& options) {
    if (!(options.tol > 0.0)) {
        throw DomainError("solve: tolerance must be positive");
    }
    if (std::abs(grid->horizon() - problem.horizon()) > 1e-12 * problem.horizon()) {
        throw DomainError("solve: grid horizon does not match the problem horizon");
    }

    const FracIntegralOperator op_main(problem.alpha(), grid);
    const auto ops_h = inner_operators(problem, op_main);

    ConvergenceReport report;
    PicardState state = initial_state(problem, grid);
    for (std::size_t k = 0; k < options.max_iter; ++k) {
        state = picard_step(state, problem, op_main, ops_h);
        report.deltas.push_back(state.delta);
        report.iterations_used = state.iteration;
        if (state.delta <= options.tol) {
            report.converged = true;
            break;
        }
    }
    if (!report.converged) {
        report.warnings.push_back("no convergence within " + std::to_string(options.max_iter) +
                                  " iterations");
    }

    // Rebuild every output from the final φ so that y and the z_h agree.
    auto derivatives = inner_derivatives(problem, state.phi, ops_h);
    const auto integral = apply_integral(op_main, state.phi);
    const auto taylor = taylor_part(problem.initial_values(), grid);
    std::vector<double> y(grid->size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = integral.values()[i] + taylor.values()[i];
    }

    if (problem.m() == 0) {
        report.lipschitz_estimate = 0.0;
    } else if (options.lipschitz) {
        report.lipschitz_estimate = *options.lipschitz;
    } else {
        std::vector<Interval> box;
        for (const auto& zh : derivatives) {
            const auto [lo, hi] = std::minmax_element(zh.values().begin(), zh.values().end());
            const double pad = 0.1 * (*hi - *lo) + 0.1;
            box.push_back({*lo - pad, *hi + pad});
        }
        const Interval t_range{grid->node(1), grid->horizon()};
        try {
            report.lipschitz_estimate =
                estimate_lipschitz(problem.rhs(), t_range, box, options.lipschitz_samples);
        } catch (const EvalError& e) {
            report.lipschitz_estimate = std::numeric_limits<double>::quiet_NaN();
            report.warnings.push_back(std::string("Lipschitz estimate unavailable: ") + e.what());
        }
    }
    if (std::isfinite(report.lipschitz_estimate)) {
        report.contraction_estimate =
            estimate_contraction(report.lipschitz_estimate, problem, problem.horizon());
        if (report.contraction_estimate >= 1.0) {
            std::ostringstream msg;
            msg << "contraction estimate omega = " << report.contraction_estimate
                << " >= 1 on [0, T]; geometric decay of the deltas is not guaranteed";
            report.warnings.push_back(msg.str());
        }
    } else {
        report.contraction_estimate = std::numeric_limits<double>::quiet_NaN();
    }

    return SolutionTrajectory{grid, SampledFunction(grid, std::move(y)), std::move(derivatives),
                              std::move(state.phi), std::move(report)};
}

}  // namespace fracpicard

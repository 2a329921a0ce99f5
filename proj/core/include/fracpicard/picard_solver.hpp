#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracpicard/fractional_ops.hpp"
#include "fracpicard/grid.hpp"
#include "fracpicard/problem.hpp"

namespace fracpicard {

/// One Picard iterate. phi approximates ᶜD^α y, z[h] approximates ᶜD^{α_h} y.
struct PicardState {
    std::size_t iteration = 0;
    SampledFunction phi;
    std::vector<SampledFunction> z;
    double delta = 0.0;
};

struct ConvergenceReport {
    /// ||t^γ (φ_k - φ_{k-1})||_C for k = 1, 2, ...
    std::vector<double> deltas;
    double lipschitz_estimate = 0.0;
    /// ω = L Σ_h T^{α-α_h} / Γ(α-α_h+1); a diagnostic, not a convergence guarantee.
    double contraction_estimate = 0.0;
    bool converged = false;
    std::size_t iterations_used = 0;
    std::vector<std::string> warnings;
};

struct SolutionTrajectory {
    GridPtr grid;
    SampledFunction y;
    std::vector<SampledFunction> derivatives;
    SampledFunction phi;
    ConvergenceReport report;
};

struct SolveOptions {
    double tol = 1e-10;
    std::size_t max_iter = 200;
    /// Lipschitz constant for the contraction diagnostic. Estimated from the
    /// final iterate's range when absent.
    std::optional<double> lipschitz;
    std::size_t lipschitz_samples = 2000;
};

/// Σ_j b_j t^j / j!.
SampledFunction taylor_part(std::span<const double> initial_values, GridPtr grid);

/// ᶜD^{α_h} of the Taylor part: Σ_{j=n_h}^{n-1} b_j t^{j-α_h} / Γ(j+1-α_h).
/// Identical to taylor_part() for α_h = 0.
SampledFunction derivative_taylor_part(std::span<const double> initial_values, double alpha_h,
                                       GridPtr grid);

/// φ⁰ = f(t, derivative Taylor parts).
PicardState initial_state(const MultiTermProblem& problem, GridPtr grid);

/// One application of the fixed-point map on φ:
///   z_h = I^{α-α_h} φ + ᶜD^{α_h}[Taylor],   φ_new = f(t, z_1, ..., z_m).
/// ops_h[h] must have order α - α_h. Throws EvalError (with t) when f leaves its
/// domain and NumericalError on non-finite values.
PicardState picard_step(const PicardState& state, const MultiTermProblem& problem,
                        const FracIntegralOperator& op_main,
                        std::span<const FracIntegralOperator> ops_h);

/// Iterates picard_step until delta <= tol or max_iter, then rebuilds
/// y = Taylor + I^α φ. A run that exhausts max_iter is returned with
/// report.converged = false.
SolutionTrajectory solve(const MultiTermProblem& problem, GridPtr grid,
                         const SolveOptions& options = {});

/// ω = L Σ_h T_eff^{α-α_h} / Γ(α-α_h+1).
double estimate_contraction(double lipschitz, const MultiTermProblem& problem, double t_eff);

}  // namespace fracpicard

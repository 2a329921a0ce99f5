#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracpicard/grid.hpp"
#include "fracpicard/picard_solver.hpp"
#include "fracpicard/problem.hpp"

namespace fracpicard {

/// Residuals of the differential and the integral form of the same problem.
struct ResidualReport {
    /// sup over interior nodes of |ᶜD^α y - f(t, ᶜD^{α_1} y, ...)|, all
    /// derivatives recomputed from y by caputo_derivative().
    double ode_residual = 0.0;
    /// sup over nodes of |y - Taylor - I^α f(t, z)| with the solver's z_h.
    double volterra_residual = 0.0;
    /// |D^k y(+0) - b_k| for k < n.
    std::vector<double> ic_errors;
    /// Nodes excluded from the ODE residual, ⌈N/32⌉ at each end.
    std::size_t nodes_skipped = 0;
};

ResidualReport check_equivalence(const SolutionTrajectory& sol, const MultiTermProblem& problem);

/// D^k y(0), k < count, from forward divided differences over node spacings
/// 1 and 2, combined by first-order Richardson extrapolation.
std::vector<double> estimate_initial_derivatives(const SampledFunction& y, std::size_t count);

struct DecayFit {
    /// Least-squares slope of log I^α f against log t over t_1 <= t <= 10 t_1.
    double slope = 0.0;
    double first_node_value = 0.0;
    /// I^α f at t_0; zero whenever α > γ.
    double limit_value = 0.0;
    /// α <= γ: the integral does not vanish at t = 0.
    bool hypothesis_violated = false;
};

/// Decay of I^α [c t^{-γ}] near t = 0.
DecayFit lemma2_decay(double gamma, double alpha, GridPtr grid, double coefficient = 1.0);

/// sup |I^α(ᶜD^α y) - (y - Σ_{j<n} y^{(j)}(0) t^j / j!)| for the polynomial
/// y = Σ c_k t^k. Requires non-integral α and degree <= 8.
double composition_identity(std::span<const double> poly_coeffs, double alpha, GridPtr grid);

struct InitialLimitReport {
    /// |I^{α-k} φ(t_1)|, k = 0..n-1. Tends to zero under refinement.
    std::vector<double> integral_limits;
    /// |D^k y(+0) - b_k|, k = 0..n-1.
    std::vector<double> derivative_errors;
};

InitialLimitReport initial_limit_checks(const MultiTermProblem& problem,
                                        const SolutionTrajectory& sol);

}  // namespace fracpicard

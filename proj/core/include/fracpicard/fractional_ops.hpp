#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracpicard/grid.hpp"

namespace fracpicard {

/// n = ⌈α⌉ for non-integral α, n = α for integral α. Zero for α = 0.
std::size_t order_ceiling(double alpha);

bool is_integral_order(double alpha);

/// Σ_k b_k t^k / k!, evaluated by Horner's rule on the coefficients b_k / k!.
double taylor_value(std::span<const double> derivs, double t);

/// Riemann-Liouville fractional integral I^β on a fixed grid.
///
/// Product-trapezoidal rule: the integrand is replaced by its piecewise-linear
/// interpolant and the kernel (t_n - τ)^{β-1} / Γ(β) is integrated against it
/// exactly, so the operator is exact on piecewise-linear data. On a uniform
/// grid the weights depend on n - j only and are stored as vectors; graded
/// grids keep a dense lower-triangular table.
///
/// Functions with a singular exponent γ > 0 are handled on the first interval
/// by integrating (t_n - τ)^{β-1} τ^{-γ} exactly against the linear
/// interpolant of τ^γ f(τ) through t_1 and t_2.
class FracIntegralOperator {
public:
    FracIntegralOperator(double order, GridPtr grid);

    double order() const noexcept { return order_; }
    const Grid& grid() const noexcept { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }

    /// w_{n,j}: weight of f(t_j) in I^β f(t_n) for regular f. Zero for j > n.
    double weight(std::size_t n, std::size_t j) const;

    /// I^β f(t_n). For singular f, n must be >= 1.
    double evaluate_at(const SampledFunction& f, std::size_t n) const;

private:
    double regular_sum(const SampledFunction& f, std::size_t n, bool skip_first_interval) const;
    double singular_first_interval(const SampledFunction& f, std::size_t n) const;

    double order_;
    double inv_gamma_;
    GridPtr grid_;
    // Uniform grids: scaled interval weights indexed by k = n - j - 1 and the
    // combined per-node weights indexed by m = n - j.
    std::vector<double> left_;
    std::vector<double> right_;
    std::vector<double> combined_;
    // Graded grids: row n holds w_{n,0..n} at offset n(n+1)/2.
    std::vector<double> table_;
    std::vector<double> first_interval_right_;
};

FracIntegralOperator build_integral_operator(double beta, GridPtr grid);

/// Samples of I^β f. The result is regular; its value at t_0 is zero
/// (requires β > γ for singular f).
SampledFunction apply_integral(const FracIntegralOperator& op, const SampledFunction& f);

/// First derivative by finite differences: three-point centered formulas in the
/// interior, three-point one-sided formulas at both ends.
SampledFunction differentiate(const SampledFunction& f);

/// Caputo derivative of order α: D^n I^{n-α} (y - Σ_{k<n} y^{(k)}(0) t^k / k!)
/// with D^n by repeated differencing. Verification only; the solver never
/// differentiates numerically.
SampledFunction caputo_derivative(const SampledFunction& y, double alpha,
                                  std::span<const double> initial_derivs);

/// max |t^γ f(t)| over the grid nodes. Requires γ >= f.singular_exponent().
double weighted_norm(const SampledFunction& f, double gamma);

}  // namespace fracpicard

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fracpicard {

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

/// Monotone mesh 0 = t_0 < t_1 < ... < t_N = T.
///
/// Graded meshes place t_i = T (i/N)^r, r >= 1; r = 1 is the uniform mesh,
/// which the integral operators treat as a convolution.
class Grid {
public:
    static GridPtr uniform(double horizon, std::size_t intervals);
    static GridPtr graded(double horizon, std::size_t intervals, double grading);

    std::span<const double> nodes() const noexcept { return nodes_; }
    double node(std::size_t i) const { return nodes_[i]; }
    std::size_t size() const noexcept { return nodes_.size(); }
    std::size_t intervals() const noexcept { return nodes_.size() - 1; }
    double horizon() const noexcept { return nodes_.back(); }
    double grading() const noexcept { return grading_; }
    bool is_uniform() const noexcept { return grading_ == 1.0; }
    double step(std::size_t j) const { return nodes_[j + 1] - nodes_[j]; }

    /// Same object, or identical node coordinates.
    bool same_as(const Grid& other) const noexcept;

private:
    Grid(std::vector<double> nodes, double grading);

    std::vector<double> nodes_;
    double grading_;
};

/// Real samples on a grid.
///
/// With a positive singular exponent γ the function behaves like t^{-γ} near
/// zero: no value is stored for t_0 and values()[i] belongs to node i + 1.
class SampledFunction {
public:
    SampledFunction(GridPtr grid, std::vector<double> values, double singular_exponent = 0.0);

    template <typename F>
    static SampledFunction sample(GridPtr grid, F&& f, double singular_exponent = 0.0) {
        const std::size_t first = singular_exponent > 0.0 ? 1 : 0;
        std::vector<double> values;
        values.reserve(grid->size() - first);
        for (std::size_t i = first; i < grid->size(); ++i) {
            values.push_back(f(grid->node(i)));
        }
        return SampledFunction(std::move(grid), std::move(values), singular_exponent);
    }

    static SampledFunction zeros(GridPtr grid);

    const Grid& grid() const noexcept { return *grid_; }
    const GridPtr& grid_ptr() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> mutable_values() noexcept { return values_; }

    double singular_exponent() const noexcept { return singular_exponent_; }
    bool is_singular() const noexcept { return singular_exponent_ > 0.0; }
    /// Index of the first node carrying a value (1 for singular functions).
    std::size_t first_node() const noexcept { return is_singular() ? 1 : 0; }

    /// Value at grid node i. Throws DomainError for i = 0 on a singular function.
    double at(std::size_t node) const;

private:
    GridPtr grid_;
    std::vector<double> values_;
    double singular_exponent_;
};

/// Pointwise a - b. Both must share a grid and singular exponent.
SampledFunction operator-(const SampledFunction& a, const SampledFunction& b);

}  // namespace fracpicard

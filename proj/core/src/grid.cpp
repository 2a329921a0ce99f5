#include "fracpicard/grid.hpp"

#include <cmath>
#include <string>

#include "fracpicard/errors.hpp"

namespace fracpicard {

Grid::Grid(std::vector<double> nodes, double grading)
    : nodes_(std::move(nodes)), grading_(grading) {}

GridPtr Grid::uniform(double horizon, std::size_t intervals) {
    return graded(horizon, intervals, 1.0);
}

GridPtr Grid::graded(double horizon, std::size_t intervals, double grading) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw DomainError("grid: horizon must be positive and finite");
    }
    if (intervals < 2) {
        throw DomainError("grid: at least two intervals are required");
    }
    if (!(grading >= 1.0) || !std::isfinite(grading)) {
        throw DomainError("grid: grading exponent must be >= 1");
    }
    std::vector<double> nodes(intervals + 1);
    const double n = static_cast<double>(intervals);
    for (std::size_t i = 0; i <= intervals; ++i) {
        const double s = static_cast<double>(i) / n;
        nodes[i] = grading == 1.0 ? horizon * s : horizon * std::pow(s, grading);
    }
    nodes.back() = horizon;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (!(nodes[i] > nodes[i - 1])) {
            throw DomainError("grid: nodes are not strictly increasing (mesh too fine for grading)");
        }
    }
    return GridPtr(new Grid(std::move(nodes), grading));
}

bool Grid::same_as(const Grid& other) const noexcept {
    return this == &other || (grading_ == other.grading_ && nodes_ == other.nodes_);
}

SampledFunction::SampledFunction(GridPtr grid, std::vector<double> values,
                                 double singular_exponent)
    : grid_(std::move(grid)), values_(std::move(values)), singular_exponent_(singular_exponent) {
    if (!grid_) {
        throw DomainError("sampled function: null grid");
    }
    if (!(singular_exponent_ >= 0.0 && singular_exponent_ < 1.0)) {
        throw DomainError("sampled function: singular exponent must lie in [0, 1)");
    }
    const std::size_t expected = grid_->size() - first_node();
    if (values_.size() != expected) {
        throw DomainError("sampled function: expected " + std::to_string(expected) +
                          " values, got " + std::to_string(values_.size()));
    }
}

SampledFunction SampledFunction::zeros(GridPtr grid) {
    const std::size_t n = grid->size();
    return SampledFunction(std::move(grid), std::vector<double>(n, 0.0));
}

double SampledFunction::at(std::size_t node) const {
    if (node < first_node()) {
        throw DomainError("sampled function: no value stored at t0 for a singular function");
    }
    return values_.at(node - first_node());
}

SampledFunction operator-(const SampledFunction& a, const SampledFunction& b) {
    if (!a.grid().same_as(b.grid())) {
        throw GridMismatchError("difference of functions on different grids");
    }
    if (a.singular_exponent() != b.singular_exponent()) {
        throw DomainError("difference of functions with different singular exponents");
    }
    std::vector<double> out(a.values().size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = a.values()[i] - b.values()[i];
    }
    return SampledFunction(a.grid_ptr(), std::move(out), a.singular_exponent());
}

}  // namespace fracpicard

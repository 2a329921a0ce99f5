#include "fracpicard/fractional_ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracpicard/errors.hpp"
#include "fracpicard/special_functions.hpp"

namespace fracpicard {
namespace {

constexpr std::size_t kMaxSeriesTerms = 400;
constexpr double kSeriesCutoff = 1e-18;

struct IntervalWeights {
    double left;   // weight of the interval's left node
    double right;  // weight of the interval's right node
};

// (1/h) ∫_0^h (d+s)^{β-1} s ds and (1/h) ∫_0^h (d+s)^{β-1} (h-s) ds, where d is
// the distance from the evaluation point to the interval's right end and s
// runs back from that end. Far intervals use the binomial expansion of
// (d+s)^{β-1} in s/d: the closed-form power differences lose ~log10(d/h)
// digits there.
IntervalWeights interval_moments(double beta, double d, double h) {
    if (d >= 2.0 * h) {
        const double p = beta - 1.0;
        const double u = h / d;
        double coeff = 1.0;
        double upow = 1.0;
        double sum_left = 0.0;
        double sum_right = 0.0;
        for (std::size_t i = 0; i < kMaxSeriesTerms; ++i) {
            const double di = static_cast<double>(i);
            const double term = coeff * upow;
            sum_left += term / (di + 2.0);
            sum_right += term / ((di + 1.0) * (di + 2.0));
            if (std::abs(term) < kSeriesCutoff * std::abs(sum_right)) break;
            coeff *= (p - di) / (di + 1.0);
            if (coeff == 0.0) break;
            upow *= u;
        }
        const double scale = std::pow(d, p) * h;
        return {scale * sum_left, scale * sum_right};
    }
    const double far = d + h;
    const double diff_b = std::pow(far, beta) - std::pow(d, beta);
    const double diff_b1 = std::pow(far, beta + 1.0) - std::pow(d, beta + 1.0);
    return {(diff_b1 / (beta + 1.0) - d * diff_b / beta) / h,
            (far * diff_b / beta - diff_b1 / (beta + 1.0)) / h};
}

double factorial(std::size_t k) {
    double out = 1.0;
    for (std::size_t i = 2; i <= k; ++i) out *= static_cast<double>(i);
    return out;
}

}  // namespace

std::size_t order_ceiling(double alpha) {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw DomainError("order must be finite and non-negative");
    }
    return static_cast<std::size_t>(std::ceil(alpha));
}

bool is_integral_order(double alpha) { return alpha == std::floor(alpha); }

double taylor_value(std::span<const double> derivs, double t) {
    double acc = 0.0;
    for (std::size_t k = derivs.size(); k-- > 0;) {
        acc = acc * t + derivs[k] / factorial(k);
    }
    return acc;
}

FracIntegralOperator::FracIntegralOperator(double order, GridPtr grid)
    : order_(order), inv_gamma_(0.0), grid_(std::move(grid)) {
    if (!(order_ > 0.0) || !std::isfinite(order_)) {
        throw DomainError("integral operator: order must be positive");
    }
    if (!grid_) {
        throw DomainError("integral operator: null grid");
    }
    inv_gamma_ = 1.0 / gamma(order_);
    const std::size_t intervals = grid_->intervals();

    if (grid_->is_uniform()) {
        const double h = grid_->horizon() / static_cast<double>(intervals);
        const double scale = std::pow(h, order_) * inv_gamma_;
        left_.resize(intervals);
        right_.resize(intervals);
        for (std::size_t k = 0; k < intervals; ++k) {
            const auto w = interval_moments(order_, static_cast<double>(k), 1.0);
            left_[k] = scale * w.left;
            right_[k] = scale * w.right;
        }
        combined_.resize(intervals + 1);
        combined_[0] = right_[0];
        for (std::size_t m = 1; m < intervals; ++m) {
            combined_[m] = right_[m] + left_[m - 1];
        }
        combined_[intervals] = 0.0;
        return;
    }

    const auto nodes = grid_->nodes();
    table_.assign((intervals + 1) * (intervals + 2) / 2, 0.0);
    first_interval_right_.assign(intervals + 1, 0.0);
    for (std::size_t n = 1; n <= intervals; ++n) {
        double* row = table_.data() + n * (n + 1) / 2;
        for (std::size_t j = 0; j < n; ++j) {
            const auto w = interval_moments(order_, nodes[n] - nodes[j + 1], nodes[j + 1] - nodes[j]);
            row[j] += w.left * inv_gamma_;
            row[j + 1] += w.right * inv_gamma_;
            if (j == 0) first_interval_right_[n] = w.right * inv_gamma_;
        }
    }
}

double FracIntegralOperator::weight(std::size_t n, std::size_t j) const {
    if (n >= grid_->size()) {
        throw DomainError("integral operator: node index out of range");
    }
    if (j > n || n == 0) return 0.0;
    if (!grid_->is_uniform()) {
        return table_[n * (n + 1) / 2 + j];
    }
    if (j == n) return combined_[0];
    if (j == 0) return left_[n - 1];
    return combined_[n - j];
}

double FracIntegralOperator::regular_sum(const SampledFunction& f, std::size_t n,
                                         bool skip_first_interval) const {
    const auto v = f.values();
    const std::size_t off = f.first_node();
    auto val = [&](std::size_t node) { return v[node - off]; };

    if (grid_->is_uniform()) {
        if (skip_first_interval) {
            if (n < 2) return 0.0;
            double sum = combined_[0] * val(n);
            for (std::size_t j = n - 1; j >= 2; --j) sum += combined_[n - j] * val(j);
            return sum + left_[n - 2] * val(1);
        }
        double sum = combined_[0] * val(n);
        for (std::size_t j = n - 1; j >= 1; --j) sum += combined_[n - j] * val(j);
        return sum + left_[n - 1] * val(0);
    }

    const double* row = table_.data() + n * (n + 1) / 2;
    if (skip_first_interval) {
        if (n < 2) return 0.0;
        double sum = 0.0;
        for (std::size_t j = n; j >= 2; --j) sum += row[j] * val(j);
        return sum + (row[1] - first_interval_right_[n]) * val(1);
    }
    double sum = 0.0;
    for (std::size_t j = n + 1; j-- > 0;) sum += row[j] * val(j);
    return sum;
}

double FracIntegralOperator::singular_first_interval(const SampledFunction& f,
                                                     std::size_t n) const {
    const double g = f.singular_exponent();
    const double beta = order_;
    const double t1 = grid_->node(1);
    const double t2 = grid_->node(2);
    const double g1 = std::pow(t1, g) * f.at(1);
    const double g2 = std::pow(t2, g) * f.at(2);

    // m0 = ∫_0^{t1} K τ^{-γ} dτ and dm = ∫_0^{t1} K τ^{-γ} (τ - t1) dτ with
    // K = (t_n - τ)^{β-1} / Γ(β).
    double m0 = 0.0;
    double dm = 0.0;
    if (n == 1) {
        const double ratio = gamma(1.0 - g) / gamma(beta + 1.0 - g);
        m0 = std::pow(t1, beta - g) * ratio;
        dm = -std::pow(t1, beta + 1.0 - g) * ratio * beta / (beta + 1.0 - g);
    } else {
        const double tn = grid_->node(n);
        const double p = beta - 1.0;
        const double x = t1 / tn;
        double coeff = 1.0;
        double xpow = 1.0;
        double s0 = 0.0;
        double sd = 0.0;
        for (std::size_t i = 0; i < kMaxSeriesTerms; ++i) {
            const double di = static_cast<double>(i);
            const double term = coeff * xpow;
            s0 += term / (di + 1.0 - g);
            sd += term / ((di + 1.0 - g) * (di + 2.0 - g));
            if (std::abs(term) < kSeriesCutoff * std::abs(sd)) break;
            coeff *= -(p - di) / (di + 1.0);
            if (coeff == 0.0) break;
            xpow *= x;
        }
        const double lead = std::pow(tn, p) * inv_gamma_;
        m0 = lead * std::pow(t1, 1.0 - g) * s0;
        dm = -lead * std::pow(t1, 2.0 - g) * sd;
    }
    const double slope = dm / (t2 - t1);
    return g1 * (m0 - slope) + g2 * slope;
}

double FracIntegralOperator::evaluate_at(const SampledFunction& f, std::size_t n) const {
    if (!f.grid().same_as(*grid_)) {
        throw GridMismatchError("integral operator applied to a function on another grid");
    }
    if (n >= grid_->size()) {
        throw DomainError("integral operator: node index out of range");
    }
    if (n == 0) {
        if (f.is_singular() && !(order_ > f.singular_exponent())) {
            throw DomainError("integral operator: I^beta f has no finite limit at t0 when beta <= gamma");
        }
        return 0.0;
    }
    if (!f.is_singular()) {
        return regular_sum(f, n, false);
    }
    return singular_first_interval(f, n) + regular_sum(f, n, true);
}

FracIntegralOperator build_integral_operator(double beta, GridPtr grid) {
    return FracIntegralOperator(beta, std::move(grid));
}

SampledFunction apply_integral(const FracIntegralOperator& op, const SampledFunction& f) {
    if (!f.grid().same_as(op.grid())) {
        throw GridMismatchError("apply_integral: function and operator grids differ");
    }
    if (f.is_singular() && !(op.order() > f.singular_exponent())) {
        throw DomainError("apply_integral: order " + std::to_string(op.order()) +
                          " must exceed the singular exponent " +
                          std::to_string(f.singular_exponent()));
    }
    std::vector<double> out(op.grid().size());
    for (std::size_t n = 0; n < out.size(); ++n) {
        out[n] = op.evaluate_at(f, n);
    }
    return SampledFunction(op.grid_ptr(), std::move(out));
}

SampledFunction differentiate(const SampledFunction& f) {
    if (f.is_singular()) {
        throw DomainError("differentiate: function must be regular");
    }
    const auto t = f.grid().nodes();
    const auto v = f.values();
    const std::size_t last = t.size() - 1;
    if (last < 2) {
        throw DomainError("differentiate: need at least three nodes");
    }
    std::vector<double> out(t.size());
    {
        const double h1 = t[1] - t[0];
        const double h2 = t[2] - t[1];
        out[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * v[0] + (h1 + h2) / (h1 * h2) * v[1] -
                 h1 / (h2 * (h1 + h2)) * v[2];
    }
    for (std::size_t i = 1; i < last; ++i) {
        const double h1 = t[i] - t[i - 1];
        const double h2 = t[i + 1] - t[i];
        out[i] = -h2 / (h1 * (h1 + h2)) * v[i - 1] + (h2 - h1) / (h1 * h2) * v[i] +
                 h1 / (h2 * (h1 + h2)) * v[i + 1];
    }
    {
        const double h1 = t[last - 1] - t[last - 2];
        const double h2 = t[last] - t[last - 1];
        out[last] = h2 / (h1 * (h1 + h2)) * v[last - 2] - (h1 + h2) / (h1 * h2) * v[last - 1] +
                    (h1 + 2.0 * h2) / (h2 * (h1 + h2)) * v[last];
    }
    return SampledFunction(f.grid_ptr(), std::move(out));
}

SampledFunction caputo_derivative(const SampledFunction& y, double alpha,
                                  std::span<const double> initial_derivs) {
    if (!(alpha > 0.0)) {
        throw DomainError("caputo_derivative: order must be positive");
    }
    if (y.is_singular()) {
        throw DomainError("caputo_derivative: function must be regular");
    }
    const std::size_t n = order_ceiling(alpha);
    if (initial_derivs.size() != n) {
        throw DomainError("caputo_derivative: expected " + std::to_string(n) +
                          " initial derivatives, got " + std::to_string(initial_derivs.size()));
    }
    if (y.grid().intervals() < 2 * n) {
        throw DomainError("caputo_derivative: grid too coarse for " + std::to_string(n) +
                          "-fold differencing");
    }

    const auto t = y.grid().nodes();
    std::vector<double> r(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        r[i] = y.values()[i] - taylor_value(initial_derivs, t[i]);
    }
    SampledFunction work(y.grid_ptr(), std::move(r));
    if (!is_integral_order(alpha)) {
        work = apply_integral(FracIntegralOperator(static_cast<double>(n) - alpha, y.grid_ptr()), work);
    }
    for (std::size_t k = 0; k < n; ++k) {
        work = differentiate(work);
    }
    return work;
}

double weighted_norm(const SampledFunction& f, double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        throw DomainError("weighted_norm: gamma must lie in [0, 1)");
    }
    if (gamma < f.singular_exponent()) {
        throw DomainError("weighted_norm: gamma below the function's singular exponent");
    }
    const auto t = f.grid().nodes();
    const auto v = f.values();
    const std::size_t off = f.first_node();
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double node = t[i + off];
        const double w = gamma == 0.0 ? 1.0 : std::pow(node, gamma);
        best = std::max(best, std::abs(w * v[i]));
    }
    return best;
}

}  // namespace fracpicard

#pragma once

#include <cstddef>

namespace fracpicard {

/// Gamma function for real arguments. Lanczos approximation (g = 7, nine
/// coefficients) for x >= 0.5 and the reflection formula below that.
/// Throws DomainError at the poles 0, -1, -2, ...
double gamma(double x);

/// log|Γ(x)|, same domain as gamma().
double log_gamma(double x);

/// Φ_β(t) = t^{β-1} / Γ(β).
///
/// Φ_1 ≡ 1 and Σ b_j Φ_{j+1}(t) is the Taylor polynomial Σ b_j t^j / j!.
/// Throws DomainError for β <= 0, t < 0, or (β < 1, t = 0).
double power_kernel(double beta, double t);

struct MLParams {
    double alpha = 1.0;
    double beta = 1.0;
    double tol = 1e-15;
    std::size_t max_terms = 2000;
};

/// Two-parameter Mittag-Leffler function E_{α,β}(z) = Σ z^k / Γ(αk + β) by
/// direct summation. Terms are formed in log space so the series stays finite
/// for |z| up to a few tens. Stops once a term falls below tol and terms are
/// decreasing; throws ConvergenceError if max_terms is exhausted first.
double mittag_leffler(const MLParams& params, double z);

}  // namespace fracpicard

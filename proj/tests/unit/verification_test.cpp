#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fracpicard/picard_solver.hpp"
#include "fracpicard/problem.hpp"
#include "fracpicard/verification.hpp"
#include "support/invalid_matrix.hpp"

namespace fp = fracpicard;
using fp::testing::base_spec;

namespace {

fp::MultiTermProblem make(double alpha, std::vector<double> orders, std::vector<double> b, const char* rhs) {
    return fp::make_problem(base_spec(alpha, std::move(orders), std::move(b), rhs));
}

const char* kManufacturedRhs = "2*t^0.5/0.88622692545275801 + 0*z1";

}  // namespace

TEST(CheckEquivalence, ManufacturedSquare) {
    const auto problem = make(1.5, {0.5}, {0.0, 0.0}, kManufacturedRhs);
    const auto sol = fp::solve(problem, fp::Grid::uniform(1.0, 1024));
    const auto r = fp::check_equivalence(sol, problem);
    EXPECT_LE(r.ode_residual, 1e-3);
    EXPECT_LE(r.volterra_residual, 1e-3);
    ASSERT_EQ(r.ic_errors.size(), 2u);
    EXPECT_LT(r.nodes_skipped, 1024u / 4);
    EXPECT_EQ(r.nodes_skipped, 64u);
}

TEST(CheckEquivalence, ZeroRhsHasNoResidual) {
    const auto problem = make(0.5, {0.0}, {3.0}, "0");
    const auto sol = fp::solve(problem, fp::Grid::uniform(1.0, 256));
    const auto r = fp::check_equivalence(sol, problem);
    EXPECT_LE(r.ode_residual, 1e-13);
    EXPECT_LE(r.volterra_residual, 1e-13);
    EXPECT_LE(r.ic_errors[0], 1e-13);
}

TEST(CheckEquivalence, CorruptedTrajectoryIsDetected) {
    const auto problem = make(0.5, {0.0}, {1.0}, "-z1");
    auto sol = fp::solve(problem, fp::Grid::uniform(1.0, 512));
    std::vector<double> scaled(sol.y.values().begin(), sol.y.values().end());
    double norm = 0.0;
    for (double& v : scaled) {
        v *= 1.1;
        norm = std::max(norm, std::fabs(v));
    }
    sol.y = fp::SampledFunction(sol.grid, scaled);
    const auto r = fp::check_equivalence(sol, problem);
    EXPECT_GE(r.volterra_residual, 0.05 * norm);
}

TEST(CheckEquivalence, ResidualsShrinkUnderRefinement) {
    const auto problem = make(1.5, {0.5}, {0.0, 0.0}, kManufacturedRhs);
    auto residual = [&](std::size_t N) {
        return fp::check_equivalence(fp::solve(problem, fp::Grid::uniform(1.0, N)), problem).ode_residual;
    };
    const double coarse = residual(256);
    const double fine = residual(512);
    EXPECT_GE(std::log2(coarse / fine), 1.0);
}

TEST(InitialDerivatives, RecoversPolynomialCoefficients) {
    const auto g = fp::Grid::uniform(1.0, 1024);
    const auto y = fp::SampledFunction::sample(g, [](double t) { return 2.0 - 3.0 * t + 4.0 * t * t; });
    const auto d = fp::estimate_initial_derivatives(y, 3);
    EXPECT_NEAR(d[0], 2.0, 1e-12);
    EXPECT_NEAR(d[1], -3.0, 1e-6);
    EXPECT_NEAR(d[2], 8.0, 1e-3);
}

TEST(DecayNearOrigin, Examples) {
    const auto g = fp::Grid::uniform(1.0, 1024);
    const auto a = fp::lemma2_decay(0.25, 0.5, g);
    EXPECT_NEAR(a.slope, 0.25, 0.05);
    EXPECT_LE(std::fabs(a.limit_value), 1e-3);
    EXPECT_FALSE(a.hypothesis_violated);

    const auto b = fp::lemma2_decay(0.0, 1.0, g);
    EXPECT_NEAR(b.slope, 1.0, 1e-6);
    EXPECT_NEAR(b.first_node_value, g->node(1), 1e-15);

    // γ = α: I^α t^-α is the constant Γ(1-α)
    const auto c = fp::lemma2_decay(0.5, 0.5, g);
    EXPECT_TRUE(c.hypothesis_violated);
    EXPECT_NEAR(c.slope, 0.0, 1e-3);
    EXPECT_NEAR(c.first_node_value, 1.7724538509055160, 1e-10);
}

TEST(DecayNearOriginProperty, SlopeSweep) {
    const auto g = fp::Grid::uniform(1.0, 1024);
    for (double alpha : {0.3, 0.5, 0.9, 1.5, 2.5}) {
        for (double gamma : {0.0, 0.25, 0.5}) {
            if (!(gamma < alpha)) continue;
            const auto fit = fp::lemma2_decay(gamma, alpha, g);
            EXPECT_NEAR(fit.slope, alpha - gamma, 0.05) << alpha << ", " << gamma;
            EXPECT_LE(std::fabs(fit.limit_value), 1e-3);
        }
    }
}

TEST(CompositionIdentity, Examples) {
    const auto g = fp::Grid::uniform(1.0, 1024);
    EXPECT_LE(fp::composition_identity(std::vector<double>{5.0}, 1.5, g), 1e-12);
    EXPECT_LE(fp::composition_identity(std::vector<double>{5.0, 2.0, 0.0, 1.0}, 1.5, g), 1e-3);
}

TEST(CompositionIdentity, DefectOrder) {
    const std::vector<double> p{5.0, 2.0, 0.0, 1.0};
    const double coarse = fp::composition_identity(p, 1.5, fp::Grid::uniform(1.0, 256));
    const double fine = fp::composition_identity(p, 1.5, fp::Grid::uniform(1.0, 512));
    EXPECT_GE(std::log2(coarse / fine), 1.3);
}

TEST(CompositionProperty, RandomPolynomials) {
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    std::uniform_int_distribution<int> deg(0, 5);
    const auto g = fp::Grid::uniform(1.0, 1024);
    for (int i = 0; i < 10; ++i) {
        std::vector<double> p(static_cast<std::size_t>(deg(rng)) + 1);
        for (double& c : p) c = coef(rng);
        for (double alpha : {1.25, 1.5, 1.75}) {
            const double defect = fp::composition_identity(p, alpha, g);
            if (p.size() <= 2) {
                EXPECT_LE(defect, 1e-12);
            } else {
                EXPECT_LE(defect, 1e-3);
            }
        }
    }
}

TEST(InitialLimits, ManufacturedAndConstantForcing) {
    const auto problem = make(1.5, {0.5}, {0.0, 0.0}, kManufacturedRhs);
    const auto sol = fp::solve(problem, fp::Grid::uniform(1.0, 1024));
    const auto r = fp::initial_limit_checks(problem, sol);
    ASSERT_EQ(r.integral_limits.size(), 2u);
    const double t1 = sol.grid->node(1);
    // φ = 2 t^0.5/Γ(1.5), so I^1.5 φ(t1) = t1^2 exactly in the continuum
    EXPECT_LE(r.integral_limits[0], 2.0 * t1 * t1);
    for (std::size_t k = 0; k < 2; ++k) EXPECT_LE(r.derivative_errors[k], 5e-2);

    const auto constant = make(0.5, {}, {1.0}, "3");
    const auto csol = fp::solve(constant, fp::Grid::uniform(1.0, 256));
    const auto c = fp::initial_limit_checks(constant, csol);
    const double s1 = csol.grid->node(1);
    EXPECT_NEAR(c.integral_limits[0], 3.0 * std::sqrt(s1) / 0.88622692545275801, 1e-13);

    const auto zero = make(0.5, {0.0}, {1.0}, "0");
    const auto z = fp::initial_limit_checks(zero, fp::solve(zero, fp::Grid::uniform(1.0, 64)));
    EXPECT_EQ(z.integral_limits[0], 0.0);
    EXPECT_EQ(z.derivative_errors[0], 0.0);
}

TEST(InitialLimits, VanishUnderRefinement) {
    const auto problem = make(1.5, {0.5}, {0.0, 0.0}, kManufacturedRhs);
    const auto a = fp::initial_limit_checks(problem, fp::solve(problem, fp::Grid::uniform(1.0, 256)));
    const auto b = fp::initial_limit_checks(problem, fp::solve(problem, fp::Grid::uniform(1.0, 1024)));
    for (std::size_t k = 0; k < 2; ++k) EXPECT_LT(b.integral_limits[k], a.integral_limits[k]);
}

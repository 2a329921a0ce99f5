#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fracpicard/errors.hpp"
#include "fracpicard/fractional_ops.hpp"
#include "fracpicard/picard_solver.hpp"
#include "fracpicard/problem.hpp"
#include "support/invalid_matrix.hpp"

namespace fp = fracpicard;
using fp::testing::base_spec;

namespace {

fp::MultiTermProblem make(double alpha, std::vector<double> orders, std::vector<double> b, const char* rhs,
                          double T = 1.0, double gamma = 0.0) {
    auto spec = base_spec(alpha, std::move(orders), std::move(b), rhs);
    spec.horizon = T;
    spec.gamma = gamma;
    return fp::make_problem(spec);
}

double sup_error(const fp::SampledFunction& f, auto&& exact) {
    double worst = 0.0;
    for (std::size_t i = f.first_node(); i < f.grid().size(); ++i) {
        worst = std::max(worst, std::fabs(f.at(i) - exact(f.grid().node(i))));
    }
    return worst;
}

const char* kManufacturedRhs = "2*t^0.5/0.88622692545275801 + 0*z1";

}  // namespace

TEST(TaylorPart, Examples) {
    const auto g = fp::Grid::uniform(2.0, 4);
    EXPECT_EQ(fp::taylor_part(std::vector<double>{1.0}, g).at(3), 1.0);
    EXPECT_DOUBLE_EQ(fp::taylor_part(std::vector<double>{1.0, 2.0}, g).at(2), 3.0);
    EXPECT_DOUBLE_EQ(fp::taylor_part(std::vector<double>{0.0, 0.0, 6.0}, g).at(4), 12.0);
}

TEST(DerivativeTaylorPart, Examples) {
    const auto g = fp::Grid::uniform(1.0, 8);
    const std::vector<double> b{1.5, -2.0, 0.25};
    const auto z0 = fp::derivative_taylor_part(b, 0.0, g);
    const auto y0 = fp::taylor_part(b, g);
    for (std::size_t i = 0; i < g->size(); ++i) EXPECT_EQ(z0.at(i), y0.at(i));

    // 3 / Γ(1.5)
    EXPECT_NEAR(fp::derivative_taylor_part(std::vector<double>{0.0, 3.0}, 0.5, g).at(8), 3.3851375012865377, 1e-14);
    const auto killed = fp::derivative_taylor_part(std::vector<double>{7.0}, 0.5, g);
    for (double v : killed.values()) EXPECT_EQ(v, 0.0);
}

// The solver's reduction D^{α_h} y = I^{α-α_h} D^α y + Σ_{j>=n_h} b_j t^{j-α_h}/Γ(j+1-α_h),
// checked on y = b_0 + b_1 t + t^p with closed-form Caputo derivatives from libm tgamma.
// p - α is an integer so that φ is a polynomial and quadrature error stays small.
TEST(PhiReduction, MonomialCheck) {
    const auto g = fp::Grid::uniform(1.0, 512);
    const double alpha = 1.6;
    const std::vector<double> b{0.7, -1.3};
    for (double p : {2.6, 3.6, 4.6}) {
        const double cphi = std::tgamma(p + 1.0) / std::tgamma(p + 1.0 - alpha);
        const auto phi = fp::SampledFunction::sample(g, [&](double t) { return cphi * std::pow(t, p - alpha); });
        for (double ah : {0.0, 0.4, 1.0, 1.3}) {
            const fp::FracIntegralOperator op(alpha - ah, g);
            const auto lifted = fp::apply_integral(op, phi);
            const auto dt = fp::derivative_taylor_part(b, ah, g);
            auto exact = [&](double t) {
                double v = std::tgamma(p + 1.0) / std::tgamma(p + 1.0 - ah) * std::pow(t, p - ah);
                if (ah == 0.0) v += b[0];
                if (ah <= 1.0) v += b[1] * std::pow(t, 1.0 - ah) / std::tgamma(2.0 - ah);
                return v;
            };
            double worst = 0.0;
            for (std::size_t i = 0; i < g->size(); ++i) {
                worst = std::max(worst, std::fabs(lifted.at(i) + dt.at(i) - exact(g->node(i))));
            }
            EXPECT_LE(worst, 5e-5) << "p " << p << " alpha_h " << ah;
        }
    }
}

TEST(PicardStep, StateFreeRhsIsExactAfterOneStep) {
    const auto problem = make(0.8, {0.0}, {1.0}, "cos(t) + 0*z1");
    const auto g = fp::Grid::uniform(1.0, 64);
    const fp::FracIntegralOperator op(0.8, g);
    const std::vector<fp::FracIntegralOperator> ops{fp::FracIntegralOperator(0.8, g)};
    const auto s0 = fp::initial_state(problem, g);
    EXPECT_EQ(s0.iteration, 0u);
    const auto s1 = fp::picard_step(s0, problem, op, ops);
    const auto s2 = fp::picard_step(s1, problem, op, ops);
    EXPECT_EQ(s1.iteration, 1u);
    EXPECT_EQ(s1.delta, 0.0);
    EXPECT_EQ(s2.delta, 0.0);
}

TEST(PicardStep, IteratesFollowMittagLefflerPartialSums) {
    const auto problem = make(0.5, {0.0}, {1.0}, "-z1");
    const auto g = fp::Grid::uniform(1.0, 1024);
    const fp::FracIntegralOperator op(0.5, g);
    const std::vector<fp::FracIntegralOperator> ops{fp::FracIntegralOperator(0.5, g)};
    auto state = fp::initial_state(problem, g);
    for (int k = 1; k <= 5; ++k) {
        state = fp::picard_step(state, problem, op, ops);
        auto partial = [&](double t) {
            double s = 0.0;
            for (int j = 0; j <= k; ++j) s += std::pow(-std::sqrt(t), j) / std::tgamma(0.5 * j + 1.0);
            return s;
        };
        EXPECT_LE(sup_error(state.z[0], partial), 1e-3) << "k = " << k;
    }
}

TEST(PicardStep, ZeroRhsKeepsInitialValue) {
    const auto problem = make(0.5, {0.0}, {2.5}, "0");
    const auto sol = fp::solve(problem, fp::Grid::uniform(1.0, 64));
    EXPECT_TRUE(sol.report.converged);
    EXPECT_EQ(sol.report.iterations_used, 1u);
    for (double v : sol.y.values()) EXPECT_EQ(v, 2.5);
}

TEST(Solve, UnitOrderConstantForcingIsLinear) {
    const auto problem = make(1.0, {}, {0.0}, "1", 3.0);
    const auto sol = fp::solve(problem, fp::Grid::uniform(3.0, 30));
    for (std::size_t i = 0; i < sol.grid->size(); ++i) {
        EXPECT_NEAR(sol.y.at(i), sol.grid->node(i), 1e-14);
    }
}

TEST(Solve, ManufacturedSquare) {
    const auto problem = make(1.5, {0.5}, {0.0, 0.0}, kManufacturedRhs);
    const auto sol = fp::solve(problem, fp::Grid::uniform(1.0, 1024));
    EXPECT_TRUE(sol.report.converged);
    EXPECT_LE(sup_error(sol.y, [](double t) { return t * t; }), 1e-4);
    EXPECT_EQ(sol.y.at(0), 0.0);
}

TEST(Solve, WeightedSingularForcing) {
    // D^0.75 (1 + sqrt t) = Γ(1.5)/Γ(0.75) t^-0.25
    const auto problem = make(0.75, {0.0}, {1.0}, "0.72320454231603857*t^(-0.25) - (z1 - 1 - sqrt(t))", 1.0, 0.25);
    const auto sol = fp::solve(problem, fp::Grid::uniform(1.0, 512));
    EXPECT_TRUE(sol.report.converged);
    EXPECT_TRUE(sol.phi.is_singular());
    EXPECT_LE(sup_error(sol.y, [](double t) { return 1.0 + std::sqrt(t); }), 1e-3);
}

TEST(Solve, GradedMeshImprovesMittagLeffler) {
    const auto problem = make(0.5, {0.0}, {1.0}, "-z1");
    auto exact = [](double t) { return std::exp(t) * std::erfc(std::sqrt(t)); };
    const double uniform = sup_error(fp::solve(problem, fp::Grid::uniform(1.0, 256)).y, exact);
    const double graded = sup_error(fp::solve(problem, fp::Grid::graded(1.0, 256, 2.0)).y, exact);
    EXPECT_LT(graded, uniform);
}

TEST(Solve, OrderZeroInnerDerivativeIsBitwiseY) {
    for (const auto& problem : {make(0.5, {0.0}, {1.0}, "-z1"), make(2.0, {0.0}, {1.0, 0.0}, "-z1"),
                                make(1.5, {0.5, 0.0}, {1.0, 0.5}, "-z1 - 0.5*z2")}) {
        const auto sol = fp::solve(problem, fp::Grid::graded(1.0, 128, 1.5));
        const auto& z = sol.derivatives.back();
        for (std::size_t i = 0; i < sol.grid->size(); ++i) ASSERT_EQ(z.at(i), sol.y.at(i)) << i;
    }
}

TEST(SolveProperty, RefinementReducesErrorByTwoAndAHalf) {
    const auto problem = make(1.5, {0.5}, {0.0, 0.0}, kManufacturedRhs);
    auto err = [&](std::size_t N) {
        return sup_error(fp::solve(problem, fp::Grid::uniform(1.0, N)).y, [](double t) { return t * t; });
    };
    double prev = err(128);
    for (std::size_t N = 256; N <= 1024; N *= 2) {
        const double cur = err(N);
        EXPECT_GE(prev / cur, 2.5) << "N = " << N;
        prev = cur;
    }
}

TEST(SolveProperty, DeltaRatioBoundedByContraction) {
    const auto problem = make(0.5, {0.0}, {1.0}, "-z1", 0.25);
    fp::SolveOptions opt;
    opt.tol = 1e-14;
    const auto sol = fp::solve(problem, fp::Grid::uniform(0.25, 256), opt);
    EXPECT_NEAR(sol.report.contraction_estimate, 0.5641895835477563, 1e-6);
    const auto& d = sol.report.deltas;
    ASSERT_GE(d.size(), 4u);
    for (std::size_t k = 1; k < d.size(); ++k) {
        if (d[k - 1] < 1e-13) break;
        EXPECT_LE(d[k] / d[k - 1], sol.report.contraction_estimate + 0.1) << "k = " << k;
    }
    EXPECT_TRUE(sol.report.warnings.empty());
}

TEST(SolveProperty, ReportInvariants) {
    const auto problem = make(0.5, {0.0}, {1.0}, "-z1", 2.0);
    fp::SolveOptions opt;
    opt.max_iter = 3;
    const auto sol = fp::solve(problem, fp::Grid::uniform(2.0, 64), opt);
    EXPECT_FALSE(sol.report.converged);
    EXPECT_EQ(sol.report.iterations_used, 3u);
    EXPECT_FALSE(sol.report.warnings.empty());
    for (double d : sol.report.deltas) EXPECT_GE(d, 0.0);

    const auto ok = fp::solve(problem, fp::Grid::uniform(2.0, 64));
    EXPECT_TRUE(ok.report.converged);
    EXPECT_LE(ok.report.deltas.back(), 1e-10);
    EXPECT_EQ(ok.y.at(0), 1.0);
}

TEST(Solve, HorizonMismatchThrows) {
    const auto problem = make(0.5, {0.0}, {1.0}, "-z1");
    EXPECT_THROW(fp::solve(problem, fp::Grid::uniform(2.0, 64)), fp::DomainError);
}

TEST(Solve, EvaluationFailureNamesTime) {
    const auto problem = make(0.5, {0.0}, {1.0}, "log(t) - z1");
    try {
        fp::solve(problem, fp::Grid::uniform(1.0, 16));
        FAIL();
    } catch (const fp::EvalError& e) {
        EXPECT_NE(std::string(e.what()).find("t = "), std::string::npos) << e.what();
    }
}

TEST(EstimateContraction, Examples) {
    const auto problem = make(0.5, {0.0}, {1.0}, "-z1");
    EXPECT_EQ(fp::estimate_contraction(0.0, problem, 0.25), 0.0);
    EXPECT_NEAR(fp::estimate_contraction(1.0, problem, 0.25), 0.5641895835477563, 1e-12);

    const auto unit_gap = make(1.5, {0.5}, {0.0, 0.0}, "-z1");
    EXPECT_NEAR(fp::estimate_contraction(2.0, unit_gap, 0.6) / fp::estimate_contraction(2.0, unit_gap, 0.3), 2.0, 1e-12);
}

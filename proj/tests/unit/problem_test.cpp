#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "fracpicard/errors.hpp"
#include "fracpicard/problem.hpp"
#include "fracpicard/problem_config.hpp"
#include "support/invalid_matrix.hpp"

namespace fp = fracpicard;
using fp::Condition;
using fp::testing::base_spec;

TEST(ValidateProblem, WeightedManufacturedCaseIsValid) {
    auto spec = base_spec(1.5, {0.5}, {0.0, 0.0});
    spec.gamma = 0.4;
    const auto r = fp::validate_problem(spec);
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.problem->n(), 2u);
    EXPECT_EQ(r.problem->m(), 1u);
    EXPECT_EQ(r.problem->inner_ceiling(0), 1u);
    EXPECT_EQ(r.problem->route(), fp::ProblemRoute::Fractional);
}

TEST(ValidateProblem, OrderChainViolation) {
    const auto r = fp::validate_problem(base_spec(0.5, {0.7}, {1.0}));
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(r.has(Condition::OrderChain));
}

TEST(ValidateProblem, InitialValueCount) {
    const auto r = fp::validate_problem(base_spec(2.0, {0.0}, {1.0}));
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(r.has(Condition::InitialValueCount));
}

TEST(ValidateProblem, IntegerOrderRouteAndYAlias) {
    const auto r = fp::validate_problem(base_spec(2.0, {0.0}, {1.0, 0.0}, "-y"));
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.problem->route(), fp::ProblemRoute::IntegerOrder);
}

TEST(ValidateProblem, NoInnerDerivatives) {
    const auto r = fp::validate_problem(base_spec(0.7, {}, {2.0}, "sin(t)"));
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.problem->m(), 0u);
}

TEST(ValidateProblem, ReportsEveryViolation) {
    auto spec = base_spec(1.5, {1.7}, {0.0}, "z4");
    spec.horizon = -1.0;
    spec.gamma = 0.8;
    const auto r = fp::validate_problem(spec);
    for (Condition c : {Condition::OrderChain, Condition::InitialValueCount, Condition::WeightRange,
                        Condition::InnerCeiling, Condition::Horizon, Condition::Rhs}) {
        EXPECT_TRUE(r.has(c)) << fp::condition_name(c);
    }
}

TEST(ValidateProblem, MakeProblemThrowsWithIssues) {
    try {
        fp::make_problem(base_spec(0.5, {0.7}, {1.0}));
        FAIL();
    } catch (const fp::ValidationError& e) {
        EXPECT_FALSE(e.issues().empty());
        EXPECT_NE(std::string(e.what()).find("order-chain"), std::string::npos);
    }
}

TEST(ValidateProblem, InvalidMatrixNamesViolatedCondition) {
    const auto cases = fp::testing::invalid_order_matrix();
    ASSERT_EQ(cases.size(), 50u);
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto r = fp::validate_problem(cases[i].spec);
        EXPECT_FALSE(r.ok()) << "case " << i;
        EXPECT_TRUE(r.has(cases[i].expected)) << "case " << i << " expected " << fp::condition_name(cases[i].expected);
    }
}

// Independent restatement of the acceptance rule used as the property oracle.
static bool admissible(double alpha, const std::vector<double>& orders, std::size_t nb, double gamma) {
    if (!(alpha > 0.0)) return false;
    double prev = alpha;
    for (double a : orders) {
        if (!(a >= 0.0 && a < prev)) return false;
        prev = a;
    }
    const double n = std::ceil(alpha);
    if (static_cast<double>(nb) != n) return false;
    if (!(gamma >= 0.0 && gamma < alpha - n + 1.0)) return false;
    if (alpha != n && !orders.empty() && !(n > std::ceil(orders[0]))) return false;
    return true;
}

TEST(ValidateProperty, AcceptsExactlyTheAdmissibleSets) {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> order(-0.2, 3.2);
    std::uniform_int_distribution<int> count(0, 3);
    std::uniform_real_distribution<double> gam(-0.1, 1.0);
    int accepted = 0;
    for (int i = 0; i < 2000; ++i) {
        double alpha = order(rng);
        if (i % 7 == 0) alpha = std::round(alpha);
        std::vector<double> orders(static_cast<std::size_t>(count(rng)));
        for (double& a : orders) a = i % 5 == 0 ? std::round(order(rng)) : order(rng);
        std::sort(orders.rbegin(), orders.rend());
        if (i % 3 == 0 && !orders.empty()) orders.back() = 0.0;
        std::size_t nb = alpha > 0.0 ? static_cast<std::size_t>(std::ceil(alpha)) : 0;
        if (i % 11 == 0) nb += 1;
        const double gamma = i % 2 == 0 ? 0.0 : gam(rng);

        std::string rhs = "t";
        for (std::size_t h = 0; h < orders.size(); ++h) rhs += " + z" + std::to_string(h + 1);
        auto spec = base_spec(alpha, orders, std::vector<double>(nb, 0.0), rhs);
        spec.gamma = gamma;
        const bool expected = admissible(alpha, orders, nb, gamma);
        EXPECT_EQ(fp::validate_problem(spec).ok(), expected)
            << "alpha " << alpha << " m " << orders.size() << " nb " << nb << " gamma " << gamma;
        accepted += expected ? 1 : 0;
    }
    EXPECT_GT(accepted, 100);
}

TEST(ProblemConfig, ParsesAllKeys) {
    const auto spec = fp::parse_problem_config(R"({
        "alpha": 1.5, "derivative_orders": [0.5], "initial_values": [0, 0],
        "horizon": 2, "gamma": 0.25, "rhs": "-z1", "exact": "t^2"})");
    EXPECT_EQ(spec.alpha, 1.5);
    EXPECT_EQ(spec.derivative_orders, std::vector<double>{0.5});
    EXPECT_EQ(spec.initial_values.size(), 2u);
    EXPECT_EQ(spec.horizon, 2.0);
    EXPECT_EQ(spec.gamma, 0.25);
    EXPECT_EQ(spec.rhs, "-z1");
    EXPECT_EQ(spec.exact.value(), "t^2");
}

TEST(ProblemConfig, GammaDefaultsToZero) {
    const auto spec = fp::parse_problem_config(
        R"({"alpha": 0.5, "derivative_orders": [0], "initial_values": [1], "horizon": 1, "rhs": "-z1"})");
    EXPECT_EQ(spec.gamma, 0.0);
    EXPECT_FALSE(spec.exact.has_value());
}

TEST(ProblemConfig, RejectsBadDocuments) {
    const char* bad[] = {
        R"({"alpha": 0.5, "derivative_orders": [0], "initial_values": [1], "horizon": 1, "rhs": "-z1", "beta": 2})",
        R"({"alpha": "0.5", "derivative_orders": [0], "initial_values": [1], "horizon": 1, "rhs": "-z1"})",
        R"({"alpha": 0.5, "derivative_orders": 0, "initial_values": [1], "horizon": 1, "rhs": "-z1"})",
        R"({"alpha": 0.5, "derivative_orders": [0], "initial_values": ["a"], "horizon": 1, "rhs": "-z1"})",
        R"({"alpha": 0.5, "derivative_orders": [0], "initial_values": [1], "rhs": "-z1"})",
        R"({"alpha": 0.5, "derivative_orders": [0], "initial_values": [1], "horizon": 1, "rhs": 3})",
        R"([1, 2])",
        R"({"alpha": 0.5,)",
    };
    for (const char* doc : bad) {
        EXPECT_THROW(fp::parse_problem_config(doc), fp::ConfigError) << doc;
    }
}

TEST(ProblemConfig, LoadFromFile) {
    const auto path = std::filesystem::temp_directory_path() / "fracpicard_problem_test.json";
    {
        std::ofstream out(path);
        out << R"({"alpha": 2, "derivative_orders": [0], "initial_values": [1, 0], "horizon": 3, "rhs": "-y"})";
    }
    const auto spec = fp::load_problem_config(path);
    EXPECT_EQ(spec.alpha, 2.0);
    EXPECT_NO_THROW(fp::make_problem(spec));
    std::filesystem::remove(path);
    EXPECT_THROW(fp::load_problem_config(path), fp::ConfigError);
}

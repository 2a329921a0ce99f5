#include <benchmark/benchmark.h>

#include "fracpicard/picard_solver.hpp"
#include "fracpicard/problem.hpp"

namespace fp = fracpicard;

static fp::MultiTermProblem mittag_leffler_problem() {
    fp::ProblemSpec spec;
    spec.alpha = 0.5;
    spec.derivative_orders = {0.0};
    spec.initial_values = {1.0};
    spec.horizon = 1.0;
    spec.rhs = "-z1";
    return fp::make_problem(spec);
}

static void BM_SolveMittagLeffler(benchmark::State& state) {
    const auto problem = mittag_leffler_problem();
    const auto g = fp::Grid::uniform(1.0, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto sol = fp::solve(problem, g);
        benchmark::DoNotOptimize(sol.y.values().data());
        state.counters["iterations"] = static_cast<double>(sol.report.iterations_used);
    }
}
BENCHMARK(BM_SolveMittagLeffler)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);

static void BM_SolveMultiTerm(benchmark::State& state) {
    fp::ProblemSpec spec;
    spec.alpha = 1.5;
    spec.derivative_orders = {0.5, 0.0};
    spec.initial_values = {1.0, 0.0};
    spec.horizon = 1.0;
    spec.rhs = "-z1 - sin(z2)";
    const auto problem = fp::make_problem(spec);
    const auto g = fp::Grid::uniform(1.0, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        auto sol = fp::solve(problem, g);
        benchmark::DoNotOptimize(sol.y.values().data());
    }
}
BENCHMARK(BM_SolveMultiTerm)->Arg(1024)->Unit(benchmark::kMillisecond);

#include <benchmark/benchmark.h>

#include <vector>

#include "fracpicard/rhs_expr.hpp"

namespace fp = fracpicard;

static const char* kExpr = "2*t^0.5/0.886 - 0.5*z1*z2 + sin(z1)*exp(-t) + sqrt(abs(z2))";

static void BM_Parse(benchmark::State& state) {
    for (auto _ : state) {
        auto e = fp::parse_rhs(kExpr, 2);
        benchmark::DoNotOptimize(&e);
    }
}
BENCHMARK(BM_Parse);

static void BM_Eval(benchmark::State& state) {
    const auto e = fp::parse_rhs(kExpr, 2);
    const std::vector<double> z{0.3, -1.2};
    double t = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(fp::eval_rhs(e, t, z));
        t += 1e-9;
    }
}
BENCHMARK(BM_Eval);

static void BM_Lipschitz(benchmark::State& state) {
    const auto e = fp::parse_rhs(kExpr, 2);
    const std::vector<fp::Interval> box{{-1.0, 1.0}, {-2.0, 2.0}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(fp::estimate_lipschitz(e, {0.01, 1.0}, box, 2000));
    }
}
BENCHMARK(BM_Lipschitz)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();

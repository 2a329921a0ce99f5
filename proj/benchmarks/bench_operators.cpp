#include <benchmark/benchmark.h>

#include <cmath>

#include "fracpicard/fractional_ops.hpp"

namespace fp = fracpicard;

static fp::GridPtr bench_grid(const benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    return state.range(1) == 0 ? fp::Grid::uniform(1.0, n) : fp::Grid::graded(1.0, n, 2.0);
}

static void BM_BuildOperator(benchmark::State& state) {
    const auto g = bench_grid(state);
    for (auto _ : state) {
        fp::FracIntegralOperator op(0.5, g);
        benchmark::DoNotOptimize(op.weight(1, 0));
    }
}
BENCHMARK(BM_BuildOperator)->ArgsProduct({{256, 1024, 4096}, {0, 1}})->Unit(benchmark::kMicrosecond);

static void BM_ApplyOperator(benchmark::State& state) {
    const auto g = bench_grid(state);
    const fp::FracIntegralOperator op(0.5, g);
    const auto f = fp::SampledFunction::sample(g, [](double t) { return std::sin(t); });
    for (auto _ : state) {
        auto r = fp::apply_integral(op, f);
        benchmark::DoNotOptimize(r.values().data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ApplyOperator)->ArgsProduct({{256, 1024, 4096}, {0, 1}})->Unit(benchmark::kMicrosecond);

static void BM_ApplySingular(benchmark::State& state) {
    const auto g = bench_grid(state);
    const fp::FracIntegralOperator op(0.75, g);
    const auto f = fp::SampledFunction::sample(g, [](double t) { return std::pow(t, -0.25); }, 0.25);
    for (auto _ : state) {
        auto r = fp::apply_integral(op, f);
        benchmark::DoNotOptimize(r.values().data());
    }
}
BENCHMARK(BM_ApplySingular)->ArgsProduct({{1024}, {0, 1}})->Unit(benchmark::kMicrosecond);

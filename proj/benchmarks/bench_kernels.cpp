#include <benchmark/benchmark.h>

#include "cyclebound/dickman.hpp"
#include "cyclebound/exact_count.hpp"
#include "cyclebound/saddle.hpp"
#include "cyclebound/series.hpp"

using namespace cyclebound;

static void BM_NuLogRecurrence(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    const std::int64_t r = state.range(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(nu_log(n, r));
    }
    state.SetComplexityN(n * r);
}
BENCHMARK(BM_NuLogRecurrence)->Args({2000, 10})->Args({10000, 100})->Args({100000, 10});

static void BM_ExactCountBigint(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(exact_count(n, 5).count.get_ui());
    }
}
BENCHMARK(BM_ExactCountBigint)->Arg(200)->Arg(2000);

static void BM_SolveSaddle(benchmark::State& state) {
    const std::int64_t n = state.range(0);
    const std::int64_t r = state.range(1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_saddle(n, r).x);
    }
}
BENCHMARK(BM_SolveSaddle)->Args({10000, 100})->Args({1000000, 1000})->Args({1000000, 500000});

static void BM_LogRhoLookup(benchmark::State& state) {
    log_rho(450.0); // force the full table build outside the loop
    double u = 2.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(log_rho(u));
        u += 0.37;
        if (u > 499.0) u = 2.0;
    }
}
BENCHMARK(BM_LogRhoLookup);

static void BM_CoeffTable(benchmark::State& state) {
    const std::int64_t r = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_coeff_table(r).d[0]);
    }
}
BENCHMARK(BM_CoeffTable)->Arg(3)->Arg(8);

BENCHMARK_MAIN();

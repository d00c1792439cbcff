#include <benchmark/benchmark.h>

#include "bdos/econ.hpp"
#include "bdos/markov.hpp"

using namespace bdos;

static void BM_StateDistribution(benchmark::State& state)
{
    AnalysisContext ctx = make_threshold_context(0.2, 0.5, 0.1, 0.3, 0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(state_distribution(ctx, Strategy::Mine));
    }
}
BENCHMARK(BM_StateDistribution);

static void BM_StopBound(benchmark::State& state)
{
    AnalysisContext ctx = make_threshold_context(0.2, 0.5, 0.16, 0.64);
    for (auto _ : state) {
        benchmark::DoNotOptimize(stop_bound(ctx));
    }
}
BENCHMARK(BM_StopBound);

static void BM_AttackThreshold(benchmark::State& state)
{
    for (auto _ : state) {
        benchmark::DoNotOptimize(attack_threshold(1.47, 0.5, 0.2, 0.0));
    }
}
BENCHMARK(BM_AttackThreshold);

int main(int argc, char** argv)
{
    benchmark::Initialize(&argc, argv);
    benchmark::RunSpecifiedBenchmarks();
}

#include <benchmark/benchmark.h>

#include "bdos/sim.hpp"

using namespace bdos;

static SimConfig bench_config(std::int64_t rounds)
{
    SimConfig config;
    config.params.alpha_a = 0.2;
    config.params.gamma = 0.5;
    config.params.lambda = 1.0;
    config.params.block_reward = 2.0;
    config.params.miners = {{0.5, 1.0}, {0.2, 1.1}, {0.1, 0.9}};
    config.strategy_table = {Strategy::Mine, Strategy::Mine, Strategy::Stop};
    config.rounds = rounds;
    config.seed = 1;
    return config;
}

static void BM_SimRounds(benchmark::State& state)
{
    SimConfig config = bench_config(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run(config));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimRounds)->Arg(10000)->Arg(100000);

int main(int argc, char** argv)
{
    benchmark::Initialize(&argc, argv);
    benchmark::RunSpecifiedBenchmarks();
}

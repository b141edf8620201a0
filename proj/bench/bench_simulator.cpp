// Serial reference vs OpenMP kernels. Arg(0) is serial, Arg(1) parallel.
#include <benchmark/benchmark.h>

#include <omp.h>

#include "adaptba/simulator.hpp"

using namespace adaptba;

namespace {

Execution exec_of(const benchmark::State& state) { return state.range(0) ? Execution::Parallel : Execution::Serial; }

void BM_success_prob(benchmark::State& state) {
    const NetworkParams net{};
    const auto ba = BandwidthConfig::uniform(3);
    SimConfig sim;
    sim.realizations = 2000;
    sim.execution = exec_of(state);
    const double thetas[] = {0.1, 1.0, 10.0};
    for (auto _ : state) benchmark::DoNotOptimize(estimate_success_prob(net, ba, sim, 0, thetas));
    state.SetItemsProcessed(state.iterations() * sim.realizations);
    state.counters["threads"] = sim.execution == Execution::Parallel ? omp_get_max_threads() : 1;
}

void BM_empirical_meta(benchmark::State& state) {
    const NetworkParams net{};
    const auto ba = BandwidthConfig::uniform(3);
    SimConfig sim;
    sim.realizations = 200;
    sim.fading_draws = 200;
    sim.window_radius = 20;
    sim.conditional = ConditionalMode::FullyEmpirical;
    sim.execution = exec_of(state);
    const double x[] = {0.6};
    for (auto _ : state) benchmark::DoNotOptimize(estimate_meta_distribution(net, ba, sim, 2, 0.316, x));
    state.SetItemsProcessed(state.iterations() * sim.realizations);
}

void BM_throughput(benchmark::State& state) {
    const NetworkParams net{};
    const auto ba = BandwidthConfig::uniform(3);
    SimConfig sim;
    sim.realizations = 1000;
    sim.execution = exec_of(state);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_throughput(net, ba, sim, 2));
    state.SetItemsProcessed(state.iterations() * sim.realizations);
}

}  // namespace

BENCHMARK(BM_success_prob)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_empirical_meta)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_throughput)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

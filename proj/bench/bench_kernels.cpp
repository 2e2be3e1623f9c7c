// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>

#include "wadmit/harness.hpp"
#include "wadmit/kernels.hpp"

namespace {

wadmit::ScheduleSet sparse_schedules(std::size_t links) {
    // a path graph: Fibonacci-many independent sets
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t l = 0; l + 1 < links; ++l) pairs.emplace_back(l, l + 1);
    const wadmit::ConflictGraph g(links, pairs);
    wadmit::LinkSet all;
    for (std::size_t l = 0; l < links; ++l) all.emplace_back(l);
    return wadmit::enumerate_schedules(g, all);
}

std::vector<double> random_weights(std::size_t links) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> w(0.0, 50.0);
    std::vector<double> out(links);
    for (auto& v : out) v = w(rng);
    return out;
}

void BM_ArgmaxSerial(benchmark::State& state) {
    const auto links = static_cast<std::size_t>(state.range(0));
    const auto set = sparse_schedules(links);
    const auto w = random_weights(links);
    for (auto _ : state) benchmark::DoNotOptimize(wadmit::kernels::argmax_weight_serial(w, set));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(set.size()));
}

void BM_ArgmaxParallel(benchmark::State& state) {
    const auto links = static_cast<std::size_t>(state.range(0));
    const auto set = sparse_schedules(links);
    const auto w = random_weights(links);
    for (auto _ : state) benchmark::DoNotOptimize(wadmit::kernels::argmax_weight_parallel(w, set));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(set.size()));
}

wadmit::ExperimentConfig triangle() {
    wadmit::ExperimentConfig c;
    c.links = 3;
    c.channel = {1.0, 1.0, 1.0};
    c.conflicts = {{0, 1}, {0, 2}, {1, 2}};
    c.active = {0, 1};
    c.new_link = 2;
    c.x_bar = 0.45;
    c.horizon = 100'000;
    c.warmup = 50'000;
    return c;
}

const std::vector<double> kEpsilons{0.2, 0.1, 0.05, 0.03, 0.02, 0.01};

void BM_SweepSerial(benchmark::State& state) {
    const auto cfg = triangle();
    for (auto _ : state) benchmark::DoNotOptimize(wadmit::run_epsilon_sweep_serial(cfg, kEpsilons));
}

void BM_SweepParallel(benchmark::State& state) {
    const auto cfg = triangle();
    for (auto _ : state) benchmark::DoNotOptimize(wadmit::run_epsilon_sweep(cfg, kEpsilons));
}

} // namespace

BENCHMARK(BM_ArgmaxSerial)->Arg(12)->Arg(16)->Arg(20);
BENCHMARK(BM_ArgmaxParallel)->Arg(12)->Arg(16)->Arg(20);
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

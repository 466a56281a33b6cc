#include <random>

#include <benchmark/benchmark.h>

#include "groupmac/activation.hpp"
#include "groupmac/bandit.hpp"
#include "groupmac/clustering.hpp"
#include "groupmac/exact_solver.hpp"

using namespace groupmac;

static void BM_BruteForceRegular(benchmark::State& state) {
    const auto pmf = make_regular_circle(10, static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_optimal(pmf, 2).value);
}
BENCHMARK(BM_BruteForceRegular)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_BruteForceUnpruned(benchmark::State& state) {
    const auto pmf = make_regular_circle(10, 2);
    BruteForceOptions opt;
    opt.use_symmetry = false;
    for (auto _ : state) benchmark::DoNotOptimize(brute_force_optimal(pmf, 2, opt).value);
}
BENCHMARK(BM_BruteForceUnpruned)->Unit(benchmark::kMillisecond);

static void BM_ExpectedSuccessDeterministic(benchmark::State& state) {
    const auto pmf = make_general_random(10, 3, 1);
    const DeterministicStrategy x(2, {0, 1, 2, 3, 1, 2, 3, 0, 1, 2});
    for (auto _ : state) benchmark::DoNotOptimize(expected_success(x, pmf));
}
BENCHMARK(BM_ExpectedSuccessDeterministic);

static void BM_ExpectedSuccessMixed(benchmark::State& state) {
    const auto pmf = make_regular_circle(10, static_cast<std::size_t>(state.range(0)));
    std::mt19937 gen(1);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<std::vector<double>> rows(10, std::vector<double>(4));
    for (auto& row : rows) {
        double total = 0.0;
        for (auto& v : row) total += v = u(gen);
        for (auto& v : row) v /= total;
    }
    const MixedStrategy phi(2, rows);
    for (auto _ : state) benchmark::DoNotOptimize(expected_success(phi, pmf));
}
BENCHMARK(BM_ExpectedSuccessMixed)->Arg(2)->Arg(3);

static void BM_TrainingTurn(benchmark::State& state) {
    const auto pmf = make_regular_circle(10, 3);
    auto s = TrainingState::initial(10, 2, {}, 1);
    for (auto _ : state) benchmark::DoNotOptimize(training_round(s, pmf));
}
BENCHMARK(BM_TrainingTurn);

static void BM_Train(benchmark::State& state) {
    const auto pmf = make_regular_circle(10, 2);
    TrainingConfig config;
    config.max_rounds = static_cast<std::size_t>(state.range(0));
    config.patience = 0;
    for (auto _ : state) benchmark::DoNotOptimize(train(pmf, 2, config, 3).rounds);
}
BENCHMARK(BM_Train)->Arg(500)->Arg(5000)->Unit(benchmark::kMillisecond);

static void BM_Diana(benchmark::State& state) {
    const auto pmf = make_regular_circle(10, 2);
    for (auto _ : state) benchmark::DoNotOptimize(diana_partition(pmf, 2));
}
BENCHMARK(BM_Diana);

static void BM_GreedyAssign(benchmark::State& state) {
    const auto pmf = make_general_random(10, 3, 1);
    for (auto _ : state) benchmark::DoNotOptimize(greedy_assign(pmf, 2));
}
BENCHMARK(BM_GreedyAssign);

BENCHMARK_MAIN();

#include "repro/effectiveness.hpp"
#include "repro/ordering.hpp"
#include "repro/stat_tests.hpp"

#include "synthetic.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace repro;

static void BM_KendallTau(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> v(0, 50);
    std::vector<double> x(static_cast<std::size_t>(state.range(0))), y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = v(rng);
        y[i] = v(rng);
    }
    for (auto _ : state) benchmark::DoNotOptimize(kendall_tau(std::span<const double>(x), std::span<const double>(y)));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KendallTau)->RangeMultiplier(4)->Range(64, 16384)->Complexity(benchmark::oNLogN);

static void BM_Rbo(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const auto c = synth::make_collection(rng, 1, static_cast<int>(state.range(0)) * 2);
    const Run a = synth::make_run(rng, c, static_cast<int>(state.range(0)), "a");
    const Run b = synth::make_run(rng, c, static_cast<int>(state.range(0)), "b");
    const auto& ra = a.topics.begin()->second;
    const auto& rb = b.topics.begin()->second;
    for (auto _ : state) benchmark::DoNotOptimize(rbo(ra, rb, RboParams{}));
}
BENCHMARK(BM_Rbo)->Arg(100)->Arg(1000);

static void BM_ScoreRun(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const auto c = synth::make_collection(rng, 50, 2000);
    const Run run = synth::make_run(rng, c, 1000, "r");
    const TopicSet topics = judged_topics(run, c.qrels);
    const MeasureConfig cfg = MeasureConfig::parse(state.range(0) == 0 ? "AP" : "nDCG");
    for (auto _ : state) benchmark::DoNotOptimize(score_run(run, c.qrels, topics, cfg));
}
BENCHMARK(BM_ScoreRun)->Arg(0)->Arg(1);

static void BM_TCdf(benchmark::State& state) {
    double t = -6.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(t_two_tailed(t, 49.0));
        t = t > 6.0 ? -6.0 : t + 0.01;
    }
}
BENCHMARK(BM_TCdf);

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "faircsb/merit.hpp"
#include "faircsb/rounding.hpp"

namespace {

static void BM_Rrs(benchmark::State& state) {
    const int num_arms = static_cast<int>(state.range(0));
    const faircsb::MeritFunction f = faircsb::MeritFunction::power_plus(1.0, 2.0, 4.0);
    faircsb::Rng rng(1);
    std::vector<double> mu(static_cast<std::size_t>(num_arms));
    for (double& m : mu) m = rng.uniform01();
    const int subset = std::max(1, num_arms / 3);
    const std::vector<double> p = faircsb::optimal_policy(f, mu, subset);
    for (auto _ : state) {
        auto arms = faircsb::rrs(p, subset, rng);
        benchmark::DoNotOptimize(arms);
    }
}
BENCHMARK(BM_Rrs)->Arg(7)->Arg(20)->Arg(100);

static void BM_PairwiseStep(benchmark::State& state) {
    faircsb::Rng rng(2);
    std::vector<double> p = {0.3, 0.7};
    for (auto _ : state) {
        p[0] = 0.3;
        p[1] = 0.7;
        faircsb::pairwise_round_step(p, 0, 1, rng);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_PairwiseStep);

}  // namespace

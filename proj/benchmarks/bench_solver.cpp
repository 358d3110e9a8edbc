#include <benchmark/benchmark.h>

#include "faircsb/merit.hpp"
#include "faircsb/optimize.hpp"
#include "faircsb/rng.hpp"

namespace {

// One confidence-region argmax per loop: this dominates the per-round cost of
// the UCB-flavored policies.
static void BM_MaximizeOverRegion(benchmark::State& state) {
    const int num_arms = static_cast<int>(state.range(0));
    const faircsb::MeritFunction f = faircsb::MeritFunction::power_plus(1.0, 2.0, 4.0);
    faircsb::Rng rng(3);
    faircsb::ConfidenceRegion region;
    region.lower.resize(static_cast<std::size_t>(num_arms));
    region.upper.resize(static_cast<std::size_t>(num_arms));
    for (std::size_t a = 0; a < region.lower.size(); ++a) {
        const double x = rng.uniform01(), y = rng.uniform01();
        region.lower[a] = std::min(x, y);
        region.upper[a] = std::max(x, y);
    }
    const int subset = std::max(1, num_arms / 3);
    for (auto _ : state) {
        auto mu = faircsb::maximize_over_region(f, region, subset);
        benchmark::DoNotOptimize(mu);
    }
}
BENCHMARK(BM_MaximizeOverRegion)->Arg(3)->Arg(7)->Arg(15);

static void BM_FairRewardObjective(benchmark::State& state) {
    const faircsb::MeritFunction f = faircsb::MeritFunction::power_plus(1.0, 2.0, 4.0);
    faircsb::Rng rng(4);
    std::vector<double> mu(7);
    for (double& m : mu) m = rng.uniform01();
    for (auto _ : state) {
        benchmark::DoNotOptimize(faircsb::fair_reward_objective(f, mu, 3));
    }
}
BENCHMARK(BM_FairRewardObjective);

}  // namespace

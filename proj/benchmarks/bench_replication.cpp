#include <benchmark/benchmark.h>

#include "faircsb/engine.hpp"

namespace {

faircsb::ExperimentConfig protocol(std::int64_t horizon) {
    faircsb::ExperimentConfig cfg;
    cfg.num_arms = 7;
    cfg.subset_size = 3;
    cfg.horizon = horizon;
    cfg.runs = 1;
    cfg.means = {0.3, 0.5, 0.7, 0.9, 0.8, 0.6, 0.4};
    cfg.delays.assign(7, faircsb::DelayModel{faircsb::GeometricDelay{0.05}});
    cfg.merit = faircsb::MeritFunction::power_plus(1.0, 2.0, 4.0);
    cfg.policies = {faircsb::PolicyKind::fcts_d};
    return cfg;
}

static void BM_ReplicationFcts(benchmark::State& state) {
    const auto cfg = protocol(state.range(0));
    int rep = 0;
    for (auto _ : state) {
        auto result = faircsb::run_replication(cfg, faircsb::PolicyKind::fcts_d, rep++);
        benchmark::DoNotOptimize(result);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ReplicationFcts)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_ReplicationFcucb(benchmark::State& state) {
    const auto cfg = protocol(state.range(0));
    int rep = 0;
    for (auto _ : state) {
        auto result = faircsb::run_replication(cfg, faircsb::PolicyKind::fcucb_d, rep++);
        benchmark::DoNotOptimize(result);
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ReplicationFcucb)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

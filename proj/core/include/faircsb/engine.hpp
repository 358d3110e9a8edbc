#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "faircsb/config.hpp"
#include "faircsb/ledger.hpp"
#include "faircsb/metrics.hpp"
#include "faircsb/rng.hpp"

namespace faircsb {

// Ground-truth simulator: draws (reward, delay) per pull and releases the
// feedback at the end of round s + delay, so it first influences a decision
// at round s + delay + 1. Infinite delays are dropped at emission.
class Environment {
  public:
    Environment(std::vector<double> means, std::vector<DelayModel> delays,
                std::uint64_t stream_seed);
    Environment(std::shared_ptr<const EmpiricalLog> log, std::uint64_t stream_seed);

    int num_arms() const { return static_cast<int>(means_.size()); }
    const std::vector<double>& true_means() const { return means_; }

    void pull(int arm, std::int64_t round);
    DeliveryBatch end_round(std::int64_t round);

  private:
    // The (reward, delay) draw for a pull is seeded by (stream, round, arm),
    // not by consumption order: runs of different policies on the same
    // replication seed share realizations wherever their chosen sets
    // coincide.
    Rng draw_rng(std::int64_t round, int arm) const;

    std::vector<double> means_;
    std::vector<DelayModel> delays_;
    std::shared_ptr<const EmpiricalLog> log_;
    std::uint64_t stream_seed_;
    std::unordered_map<std::int64_t, std::vector<std::pair<int, double>>> pending_;
};

struct ReplicationResult {
    RegretTrace trace;
    std::vector<double> selection_fractions;
    // Final learner-side counters, per arm.
    std::vector<std::int64_t> final_pulls;
    std::vector<std::int64_t> final_received;
    std::vector<double> final_observed_sum;
};

// One full T-round interaction of the given policy kind against the config's
// environment. Deterministic in (config, kind, replication).
ReplicationResult run_replication(const ExperimentConfig& config, PolicyKind kind,
                                  int replication);

struct PolicyAggregate {
    PolicyKind kind;
    // Per-round mean and sample standard deviation across runs.
    std::vector<double> rr_mean, rr_std, fr_mean, fr_std;
    std::vector<double> cum_rr_mean, cum_rr_std, cum_fr_mean, cum_fr_std;
    std::vector<double> mean_selection_fraction;  // per arm
};

struct ExperimentSummary {
    std::vector<double> p_star;
    std::vector<PolicyAggregate> policies;
};

// Runs config.runs replications per policy (replications run concurrently;
// the aggregation is a sequential fold ordered by replication index) and
// writes trace.csv, aggregate.csv and summary.csv into config.out_dir.
ExperimentSummary run_experiment(const ExperimentConfig& config);

}  // namespace faircsb

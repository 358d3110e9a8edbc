#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace faircsb {

// Per-round and cumulative regret bookkeeping for one replication, plus the
// per-arm selection counters behind the "arm selection fractions" report.
struct RegretTrace {
    std::vector<double> reward_regret;     // rr_t
    std::vector<double> fairness_regret;   // fr_t
    std::vector<double> cum_reward_regret;
    std::vector<double> cum_fairness_regret;
    std::vector<double> selection_mass;        // sum_t p_{t,a}
    std::vector<std::int64_t> selection_count;  // realized picks per arm

    explicit RegretTrace(int num_arms = 0)
        : selection_mass(static_cast<std::size_t>(num_arms)),
          selection_count(static_cast<std::size_t>(num_arms)) {}

    std::int64_t rounds() const { return static_cast<std::int64_t>(reward_regret.size()); }
    double total_reward_regret() const {
        return cum_reward_regret.empty() ? 0.0 : cum_reward_regret.back();
    }
    double total_fairness_regret() const {
        return cum_fairness_regret.empty() ? 0.0 : cum_fairness_regret.back();
    }
};

// (rr_t, fr_t) for one round:
//   rr_t = max(sum p* mu - sum p_t mu, 0),  fr_t = sum |p*_a - p_{t,a}|.
std::pair<double, double> step_regrets(std::span<const double> optimal, std::span<const double> played,
                                       std::span<const double> means);

// Appends one round to the trace and updates cumulative and per-arm counters.
void accumulate(RegretTrace& trace, double rr, double fr, std::span<const double> played,
                std::span<const int> arms);

// Realized selection count_a / T per arm; entries in [0,1], summing to L.
std::vector<double> selection_fractions(const RegretTrace& trace, std::int64_t total_rounds);

}  // namespace faircsb

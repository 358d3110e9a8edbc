#include "faircsb/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace faircsb {

std::pair<double, double> step_regrets(std::span<const double> optimal, std::span<const double> played,
                                       std::span<const double> means) {
    if (optimal.size() != played.size() || optimal.size() != means.size())
        throw std::invalid_argument("step_regrets: vector length mismatch");
    double gap = 0.0, dist = 0.0;
    for (std::size_t a = 0; a < optimal.size(); ++a) {
        gap += (optimal[a] - played[a]) * means[a];
        dist += std::abs(optimal[a] - played[a]);
    }
    return {std::max(gap, 0.0), dist};
}

void accumulate(RegretTrace& trace, double rr, double fr, std::span<const double> played,
                std::span<const int> arms) {
    if (rr < 0.0 || fr < 0.0) throw std::invalid_argument("accumulate: regrets must be >= 0");
    if (played.size() != trace.selection_mass.size())
        throw std::invalid_argument("accumulate: selection vector length mismatch");
    trace.reward_regret.push_back(rr);
    trace.fairness_regret.push_back(fr);
    trace.cum_reward_regret.push_back(trace.total_reward_regret() + rr);
    trace.cum_fairness_regret.push_back(trace.total_fairness_regret() + fr);
    for (std::size_t a = 0; a < played.size(); ++a) trace.selection_mass[a] += played[a];
    for (int arm : arms) {
        if (arm < 0 || static_cast<std::size_t>(arm) >= trace.selection_count.size())
            throw std::out_of_range("accumulate: arm index out of range");
        trace.selection_count[static_cast<std::size_t>(arm)] += 1;
    }
}

std::vector<double> selection_fractions(const RegretTrace& trace, std::int64_t total_rounds) {
    if (total_rounds < 1) throw std::invalid_argument("selection_fractions: need T >= 1");
    if (trace.rounds() == 0) throw std::invalid_argument("selection_fractions: empty trace");
    std::vector<double> fractions(trace.selection_count.size());
    for (std::size_t a = 0; a < fractions.size(); ++a)
        fractions[a] = static_cast<double>(trace.selection_count[a]) / static_cast<double>(total_rounds);
    return fractions;
}

}  // namespace faircsb

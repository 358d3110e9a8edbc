#pragma once

#include <cstdint>
#include <vector>

namespace faircsb {

// Everything delivered to the learner at the end of one round, aggregated
// per arm. The emit round and the individual delays are intentionally not
// part of this record: the learner only ever sees (count, sum).
struct DeliveryBatch {
    struct ArmDelivery {
        std::int64_t arrived_count = 0;
        double reward_sum = 0.0;
    };

    std::int64_t round = 0;
    std::vector<ArmDelivery> per_arm;

    explicit DeliveryBatch(int num_arms = 0) : per_arm(static_cast<std::size_t>(num_arms)) {}

    bool empty() const {
        for (const auto& d : per_arm)
            if (d.arrived_count > 0) return false;
        return true;
    }
};

// Learner-observable bookkeeping: pull counts N_a, received-feedback counts
// M_a and the sum of delivered rewards S_a, per arm. M_a <= N_a always.
class FeedbackLedger {
  public:
    explicit FeedbackLedger(int num_arms);

    int num_arms() const { return static_cast<int>(arms_.size()); }

    void register_pull(int arm);
    void apply_delivery(const DeliveryBatch& batch);

    std::int64_t pulls(int arm) const { return at(arm).pulls; }
    std::int64_t received(int arm) const { return at(arm).received; }
    double observed_sum(int arm) const { return at(arm).observed_sum; }

    // S_a / max(M_a, 1); well-defined with zero observations.
    double empirical_mean(int arm) const;

  private:
    struct ArmCounters {
        std::int64_t pulls = 0;
        std::int64_t received = 0;
        double observed_sum = 0.0;
    };

    const ArmCounters& at(int arm) const;
    ArmCounters& at(int arm);

    std::vector<ArmCounters> arms_;
};

}  // namespace faircsb

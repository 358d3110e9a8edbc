#include "faircsb/ledger.hpp"

#include <stdexcept>
#include <string>

namespace faircsb {

FeedbackLedger::FeedbackLedger(int num_arms) {
    if (num_arms < 1) throw std::invalid_argument("FeedbackLedger: arm count must be >= 1");
    arms_.resize(static_cast<std::size_t>(num_arms));
}

const FeedbackLedger::ArmCounters& FeedbackLedger::at(int arm) const {
    if (arm < 0 || arm >= num_arms())
        throw std::out_of_range("FeedbackLedger: arm " + std::to_string(arm) + " out of range");
    return arms_[static_cast<std::size_t>(arm)];
}

FeedbackLedger::ArmCounters& FeedbackLedger::at(int arm) {
    return const_cast<ArmCounters&>(static_cast<const FeedbackLedger*>(this)->at(arm));
}

void FeedbackLedger::register_pull(int arm) { at(arm).pulls += 1; }

void FeedbackLedger::apply_delivery(const DeliveryBatch& batch) {
    if (static_cast<int>(batch.per_arm.size()) != num_arms())
        throw std::invalid_argument("FeedbackLedger: delivery batch arm count mismatch");
    // Validate the whole batch before mutating anything.
    for (int a = 0; a < num_arms(); ++a) {
        const auto& d = batch.per_arm[static_cast<std::size_t>(a)];
        if (d.arrived_count < 0 || d.reward_sum < 0.0)
            throw std::invalid_argument("FeedbackLedger: negative delivery counts");
        if (at(a).received + d.arrived_count > at(a).pulls)
            throw std::logic_error("FeedbackLedger: delivery exceeds outstanding pulls (simulator bug)");
    }
    for (int a = 0; a < num_arms(); ++a) {
        const auto& d = batch.per_arm[static_cast<std::size_t>(a)];
        at(a).received += d.arrived_count;
        at(a).observed_sum += d.reward_sum;
    }
}

double FeedbackLedger::empirical_mean(int arm) const {
    const auto& c = at(arm);
    const std::int64_t denom = c.received > 0 ? c.received : 1;
    return c.observed_sum / static_cast<double>(denom);
}

}  // namespace faircsb

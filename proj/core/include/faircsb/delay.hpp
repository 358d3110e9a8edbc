#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "faircsb/rng.hpp"

namespace faircsb {

// A delay in rounds, or the sentinel INFINITE (feedback that never arrives).
// Finite values order by magnitude; INFINITE is greater than every finite
// value. No arithmetic mixes the sentinel with finite values.
class ExtendedDelay {
  public:
    static ExtendedDelay finite(std::int64_t rounds);
    static ExtendedDelay infinite() { return ExtendedDelay(true, 0); }

    bool is_infinite() const { return infinite_; }
    std::int64_t rounds() const;  // requires finite

    friend bool operator==(const ExtendedDelay& a, const ExtendedDelay& b) {
        return a.infinite_ == b.infinite_ && (a.infinite_ || a.rounds_ == b.rounds_);
    }
    friend bool operator<(const ExtendedDelay& a, const ExtendedDelay& b) {
        if (a.infinite_) return false;
        if (b.infinite_) return true;
        return a.rounds_ < b.rounds_;
    }
    friend bool operator<=(const ExtendedDelay& a, const ExtendedDelay& b) { return a < b || a == b; }

  private:
    ExtendedDelay(bool inf, std::int64_t r) : infinite_(inf), rounds_(r) {}
    bool infinite_;
    std::int64_t rounds_;
};

// --- Delay model variants --------------------------------------------------

struct FixedDelay {
    std::int64_t rounds = 0;
};

// Support {0, 1, 2, ...} with P[D = z] = p (1-p)^z.
struct GeometricDelay {
    double success_prob = 0.0;
};

// Pareto Type I with scale 1; the continuous draw is floored, so the
// discretized support is {1, 2, ...}. Tail index alpha > 0; alpha <= 1 means
// an infinite expectation.
struct ParetoDelay {
    double tail_index = 0.0;
};

// Delay 0 with probability arrival_prob, INFINITE otherwise.
struct PacketLossDelay {
    double arrival_prob = 0.0;
};

// Reward-dependent: one fixed delay when the realized reward is 1, another
// otherwise. Either may be INFINITE.
struct BiasedFixedDelay {
    ExtendedDelay delay_reward1 = ExtendedDelay::finite(0);
    ExtendedDelay delay_reward0 = ExtendedDelay::finite(0);
};

// Histogram over N ∪ {INFINITE}; optionally one histogram per reward value
// (index 0 for reward 0, index 1 for reward 1), making the law
// reward-dependent.
struct EmpiricalDelay {
    using Atoms = std::vector<std::pair<ExtendedDelay, double>>;
    Atoms atoms;                            // used when by_reward is empty
    std::vector<Atoms> by_reward;           // size 0 or 2
};

using DelayModel =
    std::variant<FixedDelay, GeometricDelay, ParetoDelay, PacketLossDelay, BiasedFixedDelay, EmpiricalDelay>;

// Throws std::invalid_argument when the variant's parameter constraints are
// violated (e.g. geometric success probability outside (0, 1]).
void validate_delay_model(const DelayModel& model);

// One draw from the arm's delay law. The reward argument matters only for
// the reward-dependent variants; for BiasedFixedDelay the reward-1 branch is
// taken iff reward == 1.
ExtendedDelay sample_delay(const DelayModel& model, double reward, Rng& rng);

// P[D <= z] for finite z >= 0. For reward-dependent variants this is the
// pointwise minimum over the conditional laws: the largest CDF guaranteed
// for every reward distribution, so the matching quantile is conservative.
double delay_cdf(const DelayModel& model, std::int64_t z);

// d(q) = min{ z in N : P[D <= z] >= q }, or INFINITE when no finite z
// qualifies. q must lie in (0, 1].
ExtendedDelay quantile(const DelayModel& model, double q);

// d*(q) = max_a d_a(q) under the order finite < INFINITE.
ExtendedDelay max_quantile(std::span<const DelayModel> models, double q);

}  // namespace faircsb

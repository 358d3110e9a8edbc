#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <utility>
#include <vector>

#include "faircsb/ledger.hpp"
#include "faircsb/merit.hpp"
#include "faircsb/optimize.hpp"
#include "faircsb/rng.hpp"

namespace faircsb {

enum class PolicyKind {
    fcucb_d,     // fair UCB over the received-feedback confidence region
    fcts_d,      // fair Thompson sampling on delayed Beta posteriors
    op_fcucb_d,  // optimistic-pessimistic fair UCB (reward-dependent delays)
    op_fcts_d,   // optimistic-pessimistic fair Thompson sampling
    cucb_d,      // unfair baseline: deterministic top-L by UCB
    mp_ts_d,     // unfair baseline: top-L by posterior samples
    fgreedy_d,   // epsilon-greedy baseline with fair exploitation vector
};

std::string_view to_string(PolicyKind kind);
PolicyKind policy_kind_from_string(std::string_view name);
const std::vector<PolicyKind>& all_policy_kinds();

// --- Posterior algebra -------------------------------------------------------

struct BetaPosterior {
    double shape_ones = 1.0;   // u = 1 + observed ones (+ missing, optimistic)
    double shape_zeros = 1.0;  // v = 1 + observed zeros (+ missing, pessimistic)

    void update(std::int64_t ones, std::int64_t zeros);
    double sample(Rng& rng) const { return rng.beta(shape_ones, shape_zeros); }
    double mean() const { return shape_ones / (shape_ones + shape_zeros); }
};

// Optimistic/pessimistic posterior pair: the N-M outstanding feedbacks are
// imputed as all ones for Q+ and all zeros for Q-. Both satisfy u+v = N+2.
std::pair<BetaPosterior, BetaPosterior> op_posteriors(std::int64_t pulls, std::int64_t received,
                                                      std::int64_t ones, std::int64_t zeros);

// --- Shared machinery --------------------------------------------------------

// ceil(K/L) forced-exploration sets of size L covering every arm once; the
// last set is padded with the lowest-index arms when K mod L != 0. Sets are
// sorted, 0-based.
std::vector<std::vector<int>> init_schedule(int num_arms, int subset_size);

enum class ConfidenceKind { observed, full };

// The theorem-flavored radii use log(4LKT)/(M v 1) and log(6LKT)/N; the
// body(delta) flavor uses log(4KT/delta)/(2(M v 1)) and log(6KT/delta)/(2N).
enum class RadiusVariant { theorem, body };

double confidence_radius(ConfidenceKind kind, std::int64_t pulls, std::int64_t received,
                         int num_arms, int subset_size, std::int64_t horizon,
                         RadiusVariant variant = RadiusVariant::theorem, double delta = 0.05);

struct PolicyConfig {
    int num_arms = 0;
    int subset_size = 0;
    std::int64_t horizon = 0;
    MeritFunction merit = MeritFunction::power_plus(1.0, 2.0, 4.0);
    RadiusVariant radius_variant = RadiusVariant::theorem;
    double delta = 0.05;  // only used by the body radius variant
    SolverOptions solver;
    double fgreedy_epsilon = 0.1;
};

// Confidence regions as built by the UCB-flavored policies, exposed so tests
// can drive the select pipeline from a hand-built ledger.
ConfidenceRegion fcucb_region(const FeedbackLedger& ledger, const PolicyConfig& cfg);
ConfidenceRegion opfcucb_region(const FeedbackLedger& ledger, const PolicyConfig& cfg);

// (optimistic, pessimistic) mean estimates for one arm: outstanding feedback
// imputed as all ones / all zeros. Requires at least one pull.
std::pair<double, double> op_estimates(const FeedbackLedger& ledger, int arm);

// Algorithmic cores of the TS-flavored selection vectors.
std::vector<double> fcts_vector(const MeritFunction& f, std::span<const BetaPosterior> posteriors,
                                int subset_size, Rng& rng);
std::vector<double> opfcts_vector(const MeritFunction& f,
                                  std::span<const std::pair<BetaPosterior, BetaPosterior>> posteriors,
                                  int subset_size, Rng& rng);

// Top-L indices by score, ties broken toward the lowest arm index.
std::vector<int> top_l_by_score(std::span<const double> scores, int subset_size);

// (ones, zeros) from an aggregated Bernoulli delivery; rejects non-integer
// reward sums.
std::pair<std::int64_t, std::int64_t> decode_bernoulli(std::int64_t arrived_count, double reward_sum);

// --- Policy interface --------------------------------------------------------

class Policy {
  public:
    struct Decision {
        std::vector<double> selection;  // p_t, sums to L
        std::vector<int> arms;          // realized set A_t, sorted, |A_t| = L
    };

    virtual ~Policy() = default;

    // Produces the round's decision and registers the pulls in the policy's
    // ledger. During a forced-init phase the selection vector is the 0/1
    // indicator of the scheduled set.
    Decision select(std::int64_t round, Rng& rng);

    // Feeds the end-of-round delivery back into the learner state.
    virtual void observe(const DeliveryBatch& batch);

    virtual PolicyKind kind() const = 0;
    std::string_view name() const { return to_string(kind()); }
    const FeedbackLedger& ledger() const { return ledger_; }

  protected:
    Policy(PolicyConfig cfg, bool forced_init);

    virtual Decision decide(std::int64_t round, Rng& rng) = 0;

    // Merit-proportional fair vector on the given estimates, realized
    // through the rounding scheme.
    Decision fair_decision(std::span<const double> estimates, Rng& rng);

    std::vector<double> indicator(const std::vector<int>& arms) const;

    PolicyConfig cfg_;
    FeedbackLedger ledger_;

  private:
    std::vector<std::vector<int>> init_sets_;
    std::size_t init_cursor_ = 0;
};

std::unique_ptr<Policy> make_policy(PolicyKind kind, const PolicyConfig& cfg);

}  // namespace faircsb

#include "faircsb/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "faircsb/rounding.hpp"

namespace faircsb {

std::string_view to_string(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::fcucb_d: return "fcucb_d";
        case PolicyKind::fcts_d: return "fcts_d";
        case PolicyKind::op_fcucb_d: return "op_fcucb_d";
        case PolicyKind::op_fcts_d: return "op_fcts_d";
        case PolicyKind::cucb_d: return "cucb_d";
        case PolicyKind::mp_ts_d: return "mp_ts_d";
        case PolicyKind::fgreedy_d: return "fgreedy_d";
    }
    throw std::logic_error("to_string: unknown policy kind");
}

const std::vector<PolicyKind>& all_policy_kinds() {
    static const std::vector<PolicyKind> kinds = {
        PolicyKind::fcucb_d,    PolicyKind::fcts_d,  PolicyKind::op_fcucb_d, PolicyKind::op_fcts_d,
        PolicyKind::cucb_d,     PolicyKind::mp_ts_d, PolicyKind::fgreedy_d,
    };
    return kinds;
}

PolicyKind policy_kind_from_string(std::string_view name) {
    for (PolicyKind kind : all_policy_kinds())
        if (name == to_string(kind)) return kind;
    std::string valid;
    for (PolicyKind kind : all_policy_kinds()) {
        if (!valid.empty()) valid += ", ";
        valid += to_string(kind);
    }
    throw std::invalid_argument("unknown policy \"" + std::string(name) + "\"; valid kinds: " + valid);
}

// --- Posterior algebra -------------------------------------------------------

void BetaPosterior::update(std::int64_t ones, std::int64_t zeros) {
    if (ones < 0 || zeros < 0) throw std::invalid_argument("BetaPosterior: negative counts");
    shape_ones += static_cast<double>(ones);
    shape_zeros += static_cast<double>(zeros);
}

std::pair<BetaPosterior, BetaPosterior> op_posteriors(std::int64_t pulls, std::int64_t received,
                                                      std::int64_t ones, std::int64_t zeros) {
    if (ones < 0 || zeros < 0 || ones + zeros != received)
        throw std::invalid_argument("op_posteriors: ones + zeros must equal received count");
    if (received > pulls) throw std::invalid_argument("op_posteriors: received exceeds pulls");
    const double missing = static_cast<double>(pulls - received);
    BetaPosterior optimistic{1.0 + static_cast<double>(ones) + missing, 1.0 + static_cast<double>(zeros)};
    BetaPosterior pessimistic{1.0 + static_cast<double>(ones), 1.0 + static_cast<double>(zeros) + missing};
    return {optimistic, pessimistic};
}

// --- Shared machinery --------------------------------------------------------

std::vector<std::vector<int>> init_schedule(int num_arms, int subset_size) {
    if (subset_size < 1 || num_arms < subset_size)
        throw std::invalid_argument("init_schedule: need K >= L >= 1");
    const int rounds = (num_arms + subset_size - 1) / subset_size;
    std::vector<std::vector<int>> sets;
    sets.reserve(static_cast<std::size_t>(rounds));
    for (int r = 0; r < rounds; ++r) {
        std::vector<int> set;
        set.reserve(static_cast<std::size_t>(subset_size));
        for (int k = r * subset_size; k < std::min((r + 1) * subset_size, num_arms); ++k)
            set.push_back(k);
        // Pad the ragged last set with the lowest-index arms.
        for (int k = 0; static_cast<int>(set.size()) < subset_size; ++k) set.push_back(k);
        std::sort(set.begin(), set.end());
        sets.push_back(std::move(set));
    }
    return sets;
}

double confidence_radius(ConfidenceKind kind, std::int64_t pulls, std::int64_t received,
                         int num_arms, int subset_size, std::int64_t horizon, RadiusVariant variant,
                         double delta) {
    const double K = static_cast<double>(num_arms);
    const double L = static_cast<double>(subset_size);
    const double T = static_cast<double>(horizon);
    if (kind == ConfidenceKind::observed) {
        const double m = static_cast<double>(std::max<std::int64_t>(received, 1));
        if (variant == RadiusVariant::theorem) return std::sqrt(std::log(4.0 * L * K * T) / m);
        return std::sqrt(std::log(4.0 * K * T / delta) / (2.0 * m));
    }
    if (pulls < 1) throw std::invalid_argument("confidence_radius: full kind requires pulls >= 1");
    const double n = static_cast<double>(pulls);
    if (variant == RadiusVariant::theorem) return std::sqrt(std::log(6.0 * L * K * T) / n);
    return std::sqrt(std::log(6.0 * K * T / delta) / (2.0 * n));
}

ConfidenceRegion fcucb_region(const FeedbackLedger& ledger, const PolicyConfig& cfg) {
    const int K = ledger.num_arms();
    ConfidenceRegion region;
    region.lower.resize(static_cast<std::size_t>(K));
    region.upper.resize(static_cast<std::size_t>(K));
    for (int a = 0; a < K; ++a) {
        const double mean = ledger.empirical_mean(a);
        const double c = confidence_radius(ConfidenceKind::observed, ledger.pulls(a),
                                           ledger.received(a), cfg.num_arms, cfg.subset_size,
                                           cfg.horizon, cfg.radius_variant, cfg.delta);
        region.upper[static_cast<std::size_t>(a)] = std::min(mean + c, 1.0);
        region.lower[static_cast<std::size_t>(a)] = std::max(mean - c, 0.0);
    }
    return region;
}

std::pair<double, double> op_estimates(const FeedbackLedger& ledger, int arm) {
    const std::int64_t n = ledger.pulls(arm);
    if (n < 1) throw std::logic_error("op_estimates: arm needs at least one pull");
    const double nn = static_cast<double>(n);
    // Outstanding feedback imputed as all ones (optimistic) / zeros
    // (pessimistic).
    const double optimistic =
        (nn - static_cast<double>(ledger.received(arm))) / nn + ledger.observed_sum(arm) / nn;
    const double pessimistic = ledger.observed_sum(arm) / nn;
    return {optimistic, pessimistic};
}

ConfidenceRegion opfcucb_region(const FeedbackLedger& ledger, const PolicyConfig& cfg) {
    const int K = ledger.num_arms();
    ConfidenceRegion region;
    region.lower.resize(static_cast<std::size_t>(K));
    region.upper.resize(static_cast<std::size_t>(K));
    for (int a = 0; a < K; ++a) {
        const auto [optimistic, pessimistic] = op_estimates(ledger, a);
        const double c =
            confidence_radius(ConfidenceKind::full, ledger.pulls(a), ledger.received(a),
                              cfg.num_arms, cfg.subset_size, cfg.horizon, cfg.radius_variant,
                              cfg.delta);
        region.upper[static_cast<std::size_t>(a)] = std::min(optimistic + c, 1.0);
        region.lower[static_cast<std::size_t>(a)] = std::max(pessimistic - c, 0.0);
    }
    return region;
}

std::vector<double> fcts_vector(const MeritFunction& f, std::span<const BetaPosterior> posteriors,
                                int subset_size, Rng& rng) {
    std::vector<double> samples(posteriors.size());
    for (std::size_t a = 0; a < posteriors.size(); ++a) samples[a] = posteriors[a].sample(rng);
    return optimal_policy(f, samples, subset_size);
}

std::vector<double> opfcts_vector(const MeritFunction& f,
                                  std::span<const std::pair<BetaPosterior, BetaPosterior>> posteriors,
                                  int subset_size, Rng& rng) {
    std::vector<double> averaged(posteriors.size());
    for (std::size_t a = 0; a < posteriors.size(); ++a) {
        const double optimistic = posteriors[a].first.sample(rng);
        const double pessimistic = posteriors[a].second.sample(rng);
        averaged[a] = 0.5 * (optimistic + pessimistic);
    }
    return optimal_policy(f, averaged, subset_size);
}

std::vector<int> top_l_by_score(std::span<const double> scores, int subset_size) {
    if (subset_size < 1 || static_cast<std::size_t>(subset_size) > scores.size())
        throw std::invalid_argument("top_l_by_score: need 1 <= L <= K");
    std::vector<int> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (scores[static_cast<std::size_t>(a)] != scores[static_cast<std::size_t>(b)])
            return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
        return a < b;
    });
    std::vector<int> arms(order.begin(), order.begin() + subset_size);
    std::sort(arms.begin(), arms.end());
    return arms;
}

std::pair<std::int64_t, std::int64_t> decode_bernoulli(std::int64_t arrived_count, double reward_sum) {
    const double rounded = std::round(reward_sum);
    if (std::abs(reward_sum - rounded) > 1e-9)
        throw std::invalid_argument("decode_bernoulli: non-integer reward sum for Bernoulli rewards");
    const std::int64_t ones = static_cast<std::int64_t>(rounded);
    if (ones < 0 || ones > arrived_count)
        throw std::invalid_argument("decode_bernoulli: reward sum outside [0, count]");
    return {ones, arrived_count - ones};
}

// --- Policy base ---------------------------------------------------------

Policy::Policy(PolicyConfig cfg, bool forced_init)
    : cfg_(std::move(cfg)), ledger_(cfg_.num_arms) {
    if (cfg_.subset_size < 1 || cfg_.num_arms < cfg_.subset_size)
        throw std::invalid_argument("Policy: need K >= L >= 1");
    if (forced_init) init_sets_ = init_schedule(cfg_.num_arms, cfg_.subset_size);
}

std::vector<double> Policy::indicator(const std::vector<int>& arms) const {
    std::vector<double> p(static_cast<std::size_t>(cfg_.num_arms), 0.0);
    for (int arm : arms) p[static_cast<std::size_t>(arm)] = 1.0;
    return p;
}

Policy::Decision Policy::select(std::int64_t round, Rng& rng) {
    Decision decision;
    if (init_cursor_ < init_sets_.size()) {
        decision.arms = init_sets_[init_cursor_++];
        decision.selection = indicator(decision.arms);
    } else {
        decision = decide(round, rng);
    }
    for (int arm : decision.arms) ledger_.register_pull(arm);
    return decision;
}

void Policy::observe(const DeliveryBatch& batch) { ledger_.apply_delivery(batch); }

Policy::Decision Policy::fair_decision(std::span<const double> estimates, Rng& rng) {
    Decision decision;
    decision.selection = optimal_policy(cfg_.merit, estimates, cfg_.subset_size);
    decision.arms = rrs(decision.selection, cfg_.subset_size, rng);
    return decision;
}

// --- Concrete policies ---------------------------------------------------

namespace {

class FcucbPolicy final : public Policy {
  public:
    explicit FcucbPolicy(PolicyConfig cfg) : Policy(std::move(cfg), /*forced_init=*/true) {}
    PolicyKind kind() const override { return PolicyKind::fcucb_d; }

  protected:
    Decision decide(std::int64_t, Rng& rng) override {
        const ConfidenceRegion region = fcucb_region(ledger_, cfg_);
        const std::vector<double> mu =
            maximize_over_region(cfg_.merit, region, cfg_.subset_size, cfg_.solver);
        return fair_decision(mu, rng);
    }
};

class OpFcucbPolicy final : public Policy {
  public:
    explicit OpFcucbPolicy(PolicyConfig cfg) : Policy(std::move(cfg), /*forced_init=*/true) {}
    PolicyKind kind() const override { return PolicyKind::op_fcucb_d; }

  protected:
    Decision decide(std::int64_t, Rng& rng) override {
        const ConfidenceRegion region = opfcucb_region(ledger_, cfg_);
        const std::vector<double> mu =
            maximize_over_region(cfg_.merit, region, cfg_.subset_size, cfg_.solver);
        return fair_decision(mu, rng);
    }
};

class FctsPolicy final : public Policy {
  public:
    explicit FctsPolicy(PolicyConfig cfg)
        : Policy(std::move(cfg), /*forced_init=*/false),
          posteriors_(static_cast<std::size_t>(cfg_.num_arms)) {}
    PolicyKind kind() const override { return PolicyKind::fcts_d; }

    void observe(const DeliveryBatch& batch) override {
        Policy::observe(batch);
        for (std::size_t a = 0; a < batch.per_arm.size(); ++a) {
            const auto& d = batch.per_arm[a];
            if (d.arrived_count == 0) continue;
            const auto [ones, zeros] = decode_bernoulli(d.arrived_count, d.reward_sum);
            posteriors_[a].update(ones, zeros);
        }
    }

  protected:
    Decision decide(std::int64_t, Rng& rng) override {
        Decision decision;
        decision.selection = fcts_vector(cfg_.merit, posteriors_, cfg_.subset_size, rng);
        decision.arms = rrs(decision.selection, cfg_.subset_size, rng);
        return decision;
    }

  private:
    std::vector<BetaPosterior> posteriors_;
};

class OpFctsPolicy final : public Policy {
  public:
    explicit OpFctsPolicy(PolicyConfig cfg)
        : Policy(std::move(cfg), /*forced_init=*/false),
          ones_(static_cast<std::size_t>(cfg_.num_arms)),
          zeros_(static_cast<std::size_t>(cfg_.num_arms)) {}
    PolicyKind kind() const override { return PolicyKind::op_fcts_d; }

    void observe(const DeliveryBatch& batch) override {
        Policy::observe(batch);
        for (std::size_t a = 0; a < batch.per_arm.size(); ++a) {
            const auto& d = batch.per_arm[a];
            if (d.arrived_count == 0) continue;
            const auto [ones, zeros] = decode_bernoulli(d.arrived_count, d.reward_sum);
            ones_[a] += ones;
            zeros_[a] += zeros;
        }
    }

  protected:
    Decision decide(std::int64_t, Rng& rng) override {
        std::vector<std::pair<BetaPosterior, BetaPosterior>> posteriors(ones_.size());
        for (std::size_t a = 0; a < ones_.size(); ++a) {
            const int arm = static_cast<int>(a);
            posteriors[a] =
                op_posteriors(ledger_.pulls(arm), ledger_.received(arm), ones_[a], zeros_[a]);
        }
        Decision decision;
        decision.selection = opfcts_vector(cfg_.merit, posteriors, cfg_.subset_size, rng);
        decision.arms = rrs(decision.selection, cfg_.subset_size, rng);
        return decision;
    }

  private:
    std::vector<std::int64_t> ones_, zeros_;
};

class CucbPolicy final : public Policy {
  public:
    explicit CucbPolicy(PolicyConfig cfg) : Policy(std::move(cfg), /*forced_init=*/true) {}
    PolicyKind kind() const override { return PolicyKind::cucb_d; }

  protected:
    Decision decide(std::int64_t, Rng&) override {
        std::vector<double> ucb(static_cast<std::size_t>(cfg_.num_arms));
        for (int a = 0; a < cfg_.num_arms; ++a) {
            const double c = confidence_radius(ConfidenceKind::observed, ledger_.pulls(a),
                                               ledger_.received(a), cfg_.num_arms, cfg_.subset_size,
                                               cfg_.horizon, cfg_.radius_variant, cfg_.delta);
            ucb[static_cast<std::size_t>(a)] = ledger_.empirical_mean(a) + c;
        }
        Decision decision;
        decision.arms = top_l_by_score(ucb, cfg_.subset_size);
        decision.selection = indicator(decision.arms);
        return decision;
    }
};

class MpTsPolicy final : public Policy {
  public:
    explicit MpTsPolicy(PolicyConfig cfg)
        : Policy(std::move(cfg), /*forced_init=*/false),
          posteriors_(static_cast<std::size_t>(cfg_.num_arms)) {}
    PolicyKind kind() const override { return PolicyKind::mp_ts_d; }

    void observe(const DeliveryBatch& batch) override {
        Policy::observe(batch);
        for (std::size_t a = 0; a < batch.per_arm.size(); ++a) {
            const auto& d = batch.per_arm[a];
            if (d.arrived_count == 0) continue;
            const auto [ones, zeros] = decode_bernoulli(d.arrived_count, d.reward_sum);
            posteriors_[a].update(ones, zeros);
        }
    }

  protected:
    Decision decide(std::int64_t, Rng& rng) override {
        std::vector<double> samples(posteriors_.size());
        for (std::size_t a = 0; a < posteriors_.size(); ++a) samples[a] = posteriors_[a].sample(rng);
        Decision decision;
        decision.arms = top_l_by_score(samples, cfg_.subset_size);
        decision.selection = indicator(decision.arms);
        return decision;
    }

  private:
    std::vector<BetaPosterior> posteriors_;
};

class FgreedyPolicy final : public Policy {
  public:
    explicit FgreedyPolicy(PolicyConfig cfg) : Policy(std::move(cfg), /*forced_init=*/false) {}
    PolicyKind kind() const override { return PolicyKind::fgreedy_d; }

  protected:
    Decision decide(std::int64_t, Rng& rng) override {
        if (rng.uniform01() < cfg_.fgreedy_epsilon) {
            // Uniformly random L-subset; the marginal L/K stands in for p_t
            // in the regret accounting.
            std::vector<int> pool(static_cast<std::size_t>(cfg_.num_arms));
            std::iota(pool.begin(), pool.end(), 0);
            for (int k = 0; k < cfg_.subset_size; ++k) {
                const std::int64_t j =
                    k + rng.uniform_int(static_cast<std::int64_t>(cfg_.num_arms - k));
                std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(j)]);
            }
            Decision decision;
            decision.arms.assign(pool.begin(), pool.begin() + cfg_.subset_size);
            std::sort(decision.arms.begin(), decision.arms.end());
            decision.selection.assign(static_cast<std::size_t>(cfg_.num_arms),
                                      static_cast<double>(cfg_.subset_size) / cfg_.num_arms);
            return decision;
        }
        std::vector<double> means(static_cast<std::size_t>(cfg_.num_arms));
        for (int a = 0; a < cfg_.num_arms; ++a)
            means[static_cast<std::size_t>(a)] = ledger_.empirical_mean(a);
        return fair_decision(means, rng);
    }
};

}  // namespace

std::unique_ptr<Policy> make_policy(PolicyKind kind, const PolicyConfig& cfg) {
    switch (kind) {
        case PolicyKind::fcucb_d: return std::make_unique<FcucbPolicy>(cfg);
        case PolicyKind::fcts_d: return std::make_unique<FctsPolicy>(cfg);
        case PolicyKind::op_fcucb_d: return std::make_unique<OpFcucbPolicy>(cfg);
        case PolicyKind::op_fcts_d: return std::make_unique<OpFctsPolicy>(cfg);
        case PolicyKind::cucb_d: return std::make_unique<CucbPolicy>(cfg);
        case PolicyKind::mp_ts_d: return std::make_unique<MpTsPolicy>(cfg);
        case PolicyKind::fgreedy_d: return std::make_unique<FgreedyPolicy>(cfg);
    }
    throw std::logic_error("make_policy: unknown policy kind");
}

}  // namespace faircsb

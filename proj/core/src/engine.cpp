#include "faircsb/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "faircsb/policies.hpp"

namespace faircsb {

namespace {

constexpr std::uint64_t kEnvStreamTag = 0x656e76;     // "env"
constexpr std::uint64_t kPolicyStreamTag = 0x706f6c;  // "pol"

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

Environment::Environment(std::vector<double> means, std::vector<DelayModel> delays,
                         std::uint64_t stream_seed)
    : means_(std::move(means)), delays_(std::move(delays)), stream_seed_(stream_seed) {
    if (means_.empty() || means_.size() != delays_.size())
        throw std::invalid_argument("Environment: means/delays size mismatch");
}

Environment::Environment(std::shared_ptr<const EmpiricalLog> log, std::uint64_t stream_seed)
    : log_(std::move(log)), stream_seed_(stream_seed) {
    if (!log_ || log_->num_arms() == 0) throw std::invalid_argument("Environment: empty log");
    means_ = log_->mean_rewards();
}

Rng Environment::draw_rng(std::int64_t round, int arm) const {
    return Rng(derive_seed(stream_seed_,
                           {static_cast<std::uint64_t>(round), static_cast<std::uint64_t>(arm)}));
}

void Environment::pull(int arm, std::int64_t round) {
    if (arm < 0 || arm >= num_arms()) throw std::out_of_range("Environment: arm out of range");
    Rng rng = draw_rng(round, arm);

    double reward;
    ExtendedDelay delay = ExtendedDelay::infinite();
    if (log_) {
        const auto& samples = log_->samples[static_cast<std::size_t>(arm)];
        const auto& pick = samples[static_cast<std::size_t>(
            rng.uniform_int(static_cast<std::int64_t>(samples.size())))];
        reward = pick.first;
        delay = pick.second;
    } else {
        reward = rng.bernoulli(means_[static_cast<std::size_t>(arm)]) ? 1.0 : 0.0;
        delay = sample_delay(delays_[static_cast<std::size_t>(arm)], reward, rng);
    }

    if (delay.is_infinite()) return;  // never delivered
    pending_[round + delay.rounds()].emplace_back(arm, reward);
}

DeliveryBatch Environment::end_round(std::int64_t round) {
    DeliveryBatch batch(num_arms());
    batch.round = round;
    const auto due = pending_.find(round);
    if (due != pending_.end()) {
        for (const auto& [arm, reward] : due->second) {
            auto& d = batch.per_arm[static_cast<std::size_t>(arm)];
            d.arrived_count += 1;
            d.reward_sum += reward;
        }
        pending_.erase(due);
    }
    return batch;
}

namespace {

Environment make_environment(const ExperimentConfig& config, std::uint64_t stream_seed) {
    if (config.empirical.has_value())
        return Environment(std::make_shared<const EmpiricalLog>(*config.empirical), stream_seed);
    return Environment(config.means, config.delays, stream_seed);
}

PolicyConfig make_policy_config(const ExperimentConfig& config) {
    PolicyConfig cfg;
    cfg.num_arms = config.num_arms;
    cfg.subset_size = config.subset_size;
    cfg.horizon = config.horizon;
    cfg.merit = config.merit;
    cfg.radius_variant = config.radius_variant;
    cfg.delta = config.delta;
    cfg.solver = config.solver;
    cfg.fgreedy_epsilon = config.fgreedy_epsilon;
    return cfg;
}

}  // namespace

ReplicationResult run_replication(const ExperimentConfig& config, PolicyKind kind, int replication) {
    config.validate();
    // The environment stream is shared by every policy on the same
    // replication index; only the policy stream is keyed by the kind.
    const std::uint64_t env_seed =
        derive_seed(config.seed, {kEnvStreamTag, static_cast<std::uint64_t>(replication)});
    const std::uint64_t policy_seed =
        derive_seed(config.seed, {kPolicyStreamTag, static_cast<std::uint64_t>(kind),
                                  static_cast<std::uint64_t>(replication)});

    Environment env = make_environment(config, env_seed);
    const std::vector<double> p_star =
        optimal_policy(config.merit, env.true_means(), config.subset_size);
    std::unique_ptr<Policy> policy = make_policy(kind, make_policy_config(config));
    Rng policy_rng(policy_seed);

    RegretTrace trace(config.num_arms);
    for (std::int64_t t = 1; t <= config.horizon; ++t) {
        const Policy::Decision decision = policy->select(t, policy_rng);
        for (int arm : decision.arms) env.pull(arm, t);
        const DeliveryBatch batch = env.end_round(t);
        const auto [rr, fr] = step_regrets(p_star, decision.selection, env.true_means());
        accumulate(trace, rr, fr, decision.selection, decision.arms);
        policy->observe(batch);
    }

    ReplicationResult result;
    result.selection_fractions = selection_fractions(trace, config.horizon);
    result.trace = std::move(trace);
    for (int a = 0; a < config.num_arms; ++a) {
        result.final_pulls.push_back(policy->ledger().pulls(a));
        result.final_received.push_back(policy->ledger().received(a));
        result.final_observed_sum.push_back(policy->ledger().observed_sum(a));
    }
    return result;
}

namespace {

// Runs all replications of one policy, concurrently when configured, and
// returns them ordered by replication index.
std::vector<ReplicationResult> run_policy_replications(const ExperimentConfig& config,
                                                       PolicyKind kind) {
    std::vector<ReplicationResult> results(static_cast<std::size_t>(config.runs));
    int worker_count = config.threads > 0 ? config.threads
                                          : static_cast<int>(std::thread::hardware_concurrency());
    worker_count = std::max(1, std::min(worker_count, config.runs));

    if (worker_count == 1) {
        for (int rep = 0; rep < config.runs; ++rep)
            results[static_cast<std::size_t>(rep)] = run_replication(config, kind, rep);
        return results;
    }

    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(worker_count));
    for (int w = 0; w < worker_count; ++w) {
        workers.emplace_back([&] {
            for (;;) {
                const int rep = next.fetch_add(1);
                if (rep >= config.runs) return;
                results[static_cast<std::size_t>(rep)] = run_replication(config, kind, rep);
            }
        });
    }
    for (auto& worker : workers) worker.join();
    return results;
}

struct RunningStats {
    std::vector<double> sum, sumsq;
    int count = 0;

    explicit RunningStats(std::size_t size) : sum(size, 0.0), sumsq(size, 0.0) {}

    void add(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            sum[i] += values[i];
            sumsq[i] += values[i] * values[i];
        }
        ++count;
    }
    std::vector<double> mean() const {
        std::vector<double> m(sum.size());
        for (std::size_t i = 0; i < sum.size(); ++i) m[i] = sum[i] / count;
        return m;
    }
    std::vector<double> stddev() const {
        std::vector<double> s(sum.size(), 0.0);
        if (count < 2) return s;
        for (std::size_t i = 0; i < sum.size(); ++i) {
            const double var = (sumsq[i] - sum[i] * sum[i] / count) / (count - 1);
            s[i] = std::sqrt(std::max(var, 0.0));
        }
        return s;
    }
};

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& config) {
    config.validate();
    std::filesystem::create_directories(config.out_dir);
    const std::filesystem::path out(config.out_dir);

    std::ofstream trace_csv(out / "trace.csv", std::ios::binary);
    std::ofstream aggregate_csv(out / "aggregate.csv", std::ios::binary);
    std::ofstream summary_csv(out / "summary.csv", std::ios::binary);
    if (!trace_csv || !aggregate_csv || !summary_csv)
        throw ValidationError("cannot create output files under: " + config.out_dir);
    trace_csv << "policy,run,t,rr,fr,cum_rr,cum_fr\n";
    aggregate_csv << "policy,t,rr_mean,rr_std,fr_mean,fr_std,cum_rr_mean,cum_rr_std,cum_fr_mean,"
                     "cum_fr_std\n";
    summary_csv << "policy,arm,selection_fraction,p_star\n";

    ExperimentSummary summary;
    {
        Environment probe = make_environment(config, 0);
        summary.p_star = optimal_policy(config.merit, probe.true_means(), config.subset_size);
    }

    const std::size_t horizon = static_cast<std::size_t>(config.horizon);
    for (PolicyKind kind : config.policies) {
        const std::vector<ReplicationResult> results = run_policy_replications(config, kind);

        // trace.csv rows, thinned by trace_stride (the final round always
        // appears).
        for (int rep = 0; rep < config.runs; ++rep) {
            const RegretTrace& trace = results[static_cast<std::size_t>(rep)].trace;
            for (std::int64_t t = 1; t <= config.horizon; ++t) {
                if (t % config.trace_stride != 0 && t != config.horizon) continue;
                const std::size_t i = static_cast<std::size_t>(t - 1);
                trace_csv << to_string(kind) << ',' << rep << ',' << t << ','
                          << format_double(trace.reward_regret[i]) << ','
                          << format_double(trace.fairness_regret[i]) << ','
                          << format_double(trace.cum_reward_regret[i]) << ','
                          << format_double(trace.cum_fairness_regret[i]) << '\n';
            }
        }

        RunningStats rr(horizon), fr(horizon), cum_rr(horizon), cum_fr(horizon);
        RunningStats fractions(static_cast<std::size_t>(config.num_arms));
        for (const ReplicationResult& result : results) {
            rr.add(result.trace.reward_regret);
            fr.add(result.trace.fairness_regret);
            cum_rr.add(result.trace.cum_reward_regret);
            cum_fr.add(result.trace.cum_fairness_regret);
            fractions.add(result.selection_fractions);
        }

        PolicyAggregate aggregate;
        aggregate.kind = kind;
        aggregate.rr_mean = rr.mean();
        aggregate.rr_std = rr.stddev();
        aggregate.fr_mean = fr.mean();
        aggregate.fr_std = fr.stddev();
        aggregate.cum_rr_mean = cum_rr.mean();
        aggregate.cum_rr_std = cum_rr.stddev();
        aggregate.cum_fr_mean = cum_fr.mean();
        aggregate.cum_fr_std = cum_fr.stddev();
        aggregate.mean_selection_fraction = fractions.mean();

        for (std::int64_t t = 1; t <= config.horizon; ++t) {
            if (t % config.trace_stride != 0 && t != config.horizon) continue;
            const std::size_t i = static_cast<std::size_t>(t - 1);
            aggregate_csv << to_string(kind) << ',' << t << ',' << format_double(aggregate.rr_mean[i])
                          << ',' << format_double(aggregate.rr_std[i]) << ','
                          << format_double(aggregate.fr_mean[i]) << ','
                          << format_double(aggregate.fr_std[i]) << ','
                          << format_double(aggregate.cum_rr_mean[i]) << ','
                          << format_double(aggregate.cum_rr_std[i]) << ','
                          << format_double(aggregate.cum_fr_mean[i]) << ','
                          << format_double(aggregate.cum_fr_std[i]) << '\n';
        }
        for (int arm = 0; arm < config.num_arms; ++arm) {
            summary_csv << to_string(kind) << ',' << arm + 1 << ','
                        << format_double(aggregate.mean_selection_fraction[static_cast<std::size_t>(arm)])
                        << ',' << format_double(summary.p_star[static_cast<std::size_t>(arm)]) << '\n';
        }
        summary.policies.push_back(std::move(aggregate));
    }

    if (!trace_csv.flush() || !aggregate_csv.flush() || !summary_csv.flush())
        throw ValidationError("failed writing output files under: " + config.out_dir);
    return summary;
}

}  // namespace faircsb

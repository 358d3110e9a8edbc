#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <vector>

#include "faircsb/policies.hpp"
#include "faircsb/rounding.hpp"
#include "test_support.hpp"

using namespace faircsb;

namespace {

PolicyConfig small_config(int num_arms, int subset_size, std::int64_t horizon,
                          MeritFunction merit = MeritFunction::power_plus(1.0, 2.0, 4.0)) {
    PolicyConfig cfg;
    cfg.num_arms = num_arms;
    cfg.subset_size = subset_size;
    cfg.horizon = horizon;
    cfg.merit = std::move(merit);
    return cfg;
}

DeliveryBatch arm_batch(int num_arms, int arm, std::int64_t count, double sum) {
    DeliveryBatch batch(num_arms);
    batch.per_arm[static_cast<std::size_t>(arm)] = {count, sum};
    return batch;
}

}  // namespace

TEST_SUITE("policies") {

TEST_CASE("init schedule covers every arm once with padding") {
    const auto padded = init_schedule(7, 3);
    REQUIRE(padded.size() == 3);
    CHECK(padded[0] == std::vector<int>{0, 1, 2});
    CHECK(padded[1] == std::vector<int>{3, 4, 5});
    CHECK(padded[2] == std::vector<int>{0, 1, 6});

    const auto exact = init_schedule(6, 3);
    REQUIRE(exact.size() == 2);
    CHECK(exact[0] == std::vector<int>{0, 1, 2});
    CHECK(exact[1] == std::vector<int>{3, 4, 5});

    const auto whole = init_schedule(3, 3);
    REQUIRE(whole.size() == 1);
    CHECK(whole[0] == std::vector<int>{0, 1, 2});
}

TEST_CASE("confidence radius formulas") {
    // observed kind guards M = 0 through max(M, 1)
    CHECK(confidence_radius(ConfidenceKind::observed, 10, 0, 7, 3, 10'000) ==
          confidence_radius(ConfidenceKind::observed, 10, 1, 7, 3, 10'000));

    const double observed = confidence_radius(ConfidenceKind::observed, 400, 100, 7, 3, 10'000);
    CHECK(observed == doctest::Approx(std::sqrt(std::log(840000.0) / 100.0)).epsilon(1e-14));
    CHECK(observed == doctest::Approx(0.36934).epsilon(1e-4));

    const double full = confidence_radius(ConfidenceKind::full, 400, 100, 7, 3, 10'000);
    CHECK(full == doctest::Approx(std::sqrt(std::log(1260000.0) / 400.0)).epsilon(1e-14));
    CHECK(full == doctest::Approx(0.18740).epsilon(1e-4));

    CHECK_THROWS_AS(confidence_radius(ConfidenceKind::full, 0, 0, 7, 3, 100), std::invalid_argument);

    // body(delta) flavor keeps the algorithm statements reachable
    const double body_observed = confidence_radius(ConfidenceKind::observed, 400, 100, 7, 3,
                                                   10'000, RadiusVariant::body, 0.05);
    CHECK(body_observed ==
          doctest::Approx(std::sqrt(std::log(4.0 * 7 * 10'000 / 0.05) / 200.0)).epsilon(1e-14));
    const double body_full =
        confidence_radius(ConfidenceKind::full, 400, 100, 7, 3, 10'000, RadiusVariant::body, 0.05);
    CHECK(body_full ==
          doctest::Approx(std::sqrt(std::log(6.0 * 7 * 10'000 / 0.05) / 800.0)).epsilon(1e-14));
}

TEST_CASE("posterior updates count ones and zeros") {
    BetaPosterior post;
    post.update(2, 1);
    CHECK(post.shape_ones == 3.0);
    CHECK(post.shape_zeros == 2.0);
    post.update(0, 0);
    CHECK(post.shape_ones == 3.0);
    CHECK(post.shape_zeros == 2.0);
    CHECK_THROWS_AS(post.update(-1, 0), std::invalid_argument);
}

TEST_CASE("posterior updates commute") {
    Rng rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::pair<std::int64_t, std::int64_t>> batches;
        for (int i = 0; i < 12; ++i) batches.push_back({rng.uniform_int(4), rng.uniform_int(4)});
        BetaPosterior forward, backward;
        for (const auto& [ones, zeros] : batches) forward.update(ones, zeros);
        for (auto it = batches.rbegin(); it != batches.rend(); ++it)
            backward.update(it->first, it->second);
        REQUIRE(forward.shape_ones == backward.shape_ones);
        REQUIRE(forward.shape_zeros == backward.shape_zeros);
    }
}

TEST_CASE("optimistic/pessimistic posterior pairs") {
    SUBCASE("no outstanding feedback collapses both to the plain posterior") {
        const auto [up, down] = op_posteriors(4, 4, 3, 1);
        CHECK(up.shape_ones == 4.0);
        CHECK(up.shape_zeros == 2.0);
        CHECK(down.shape_ones == 4.0);
        CHECK(down.shape_zeros == 2.0);
    }
    SUBCASE("outstanding feedback splits the pair") {
        const auto [up, down] = op_posteriors(4, 1, 1, 0);
        CHECK(up.shape_ones == 5.0);
        CHECK(up.shape_zeros == 1.0);
        CHECK(down.shape_ones == 2.0);
        CHECK(down.shape_zeros == 4.0);
    }
    SUBCASE("nothing observed yet") {
        const auto [up, down] = op_posteriors(2, 0, 0, 0);
        CHECK(up.shape_ones == 3.0);
        CHECK(up.shape_zeros == 1.0);
        CHECK(down.shape_ones == 1.0);
        CHECK(down.shape_zeros == 3.0);
    }
    SUBCASE("total mass is always N + 2") {
        Rng rng(42);
        for (int trial = 0; trial < 50; ++trial) {
            const std::int64_t pulls = 1 + rng.uniform_int(30);
            const std::int64_t received = rng.uniform_int(pulls + 1);
            const std::int64_t ones = rng.uniform_int(received + 1);
            const auto [up, down] = op_posteriors(pulls, received, ones, received - ones);
            REQUIRE(up.shape_ones + up.shape_zeros == static_cast<double>(pulls + 2));
            REQUIRE(down.shape_ones + down.shape_zeros == static_cast<double>(pulls + 2));
        }
    }
    SUBCASE("count mismatch is rejected") {
        CHECK_THROWS_AS(op_posteriors(4, 2, 2, 1), std::invalid_argument);
        CHECK_THROWS_AS(op_posteriors(2, 3, 2, 1), std::invalid_argument);
    }
}

TEST_CASE("optimistic and pessimistic mean estimates") {
    FeedbackLedger ledger(2);
    for (int i = 0; i < 4; ++i) ledger.register_pull(0);
    ledger.apply_delivery(arm_batch(2, 0, 1, 1.0));
    const auto [optimistic, pessimistic] = op_estimates(ledger, 0);
    CHECK(optimistic == 1.0);
    CHECK(pessimistic == 0.25);

    // Maximal uncertainty with nothing observed.
    for (int i = 0; i < 3; ++i) ledger.register_pull(1);
    const auto [up1, down1] = op_estimates(ledger, 1);
    CHECK(up1 == 1.0);
    CHECK(down1 == 0.0);

    SUBCASE("gap equals the outstanding fraction exactly") {
        Rng rng(43);
        for (int trial = 0; trial < 40; ++trial) {
            FeedbackLedger lg(1);
            const std::int64_t pulls = 1 + rng.uniform_int(20);
            for (std::int64_t i = 0; i < pulls; ++i) lg.register_pull(0);
            const std::int64_t received = rng.uniform_int(pulls + 1);
            double sum = 0.0;
            for (std::int64_t i = 0; i < received; ++i) sum += rng.bernoulli(0.4) ? 1.0 : 0.0;
            lg.apply_delivery(arm_batch(1, 0, received, sum));
            const auto [up, down] = op_estimates(lg, 0);
            REQUIRE(up - down ==
                    doctest::Approx(static_cast<double>(pulls - received) / pulls).epsilon(1e-12));
            REQUIRE(down <= lg.empirical_mean(0) + 1e-12);
        }
    }
}

TEST_CASE("no outstanding feedback reduces the OP region to observed statistics") {
    PolicyConfig cfg = small_config(2, 1, 1000);
    FeedbackLedger ledger(2);
    for (int a = 0; a < 2; ++a) {
        for (int i = 0; i < 6; ++i) ledger.register_pull(a);
        ledger.apply_delivery(arm_batch(2, a, 6, a == 0 ? 3.0 : 5.0));
    }
    const ConfidenceRegion region = opfcucb_region(ledger, cfg);
    for (int a = 0; a < 2; ++a) {
        const double mean = ledger.empirical_mean(a);
        const double c = confidence_radius(ConfidenceKind::full, 6, 6, 2, 1, 1000);
        CHECK(region.upper[static_cast<std::size_t>(a)] == doctest::Approx(std::min(mean + c, 1.0)));
        CHECK(region.lower[static_cast<std::size_t>(a)] == doctest::Approx(std::max(mean - c, 0.0)));
    }
}

TEST_CASE("top-L selection breaks ties toward the lowest index") {
    const std::vector<double> distinct = {0.9, 0.5, 0.1};
    CHECK(top_l_by_score(distinct, 2) == std::vector<int>{0, 1});
    const std::vector<double> tied = {0.5, 0.5, 0.1};
    CHECK(top_l_by_score(tied, 1) == std::vector<int>{0});
    CHECK(top_l_by_score(tied, 2) == std::vector<int>{0, 1});
}

TEST_CASE("bernoulli decoding") {
    CHECK(decode_bernoulli(3, 2.0) == std::pair<std::int64_t, std::int64_t>{2, 1});
    CHECK(decode_bernoulli(2, 0.0) == std::pair<std::int64_t, std::int64_t>{0, 2});
    CHECK_THROWS_AS(decode_bernoulli(2, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(decode_bernoulli(1, 2.0), std::invalid_argument);
}

TEST_CASE("fcucb fixture: wide region checked against the grid-oracle pipeline") {
    // K=3, identity merit, L=2, per-arm (M,S) = (4,3),(4,2),(4,2), T=100.
    PolicyConfig cfg = small_config(3, 2, 100, MeritFunction::identity());
    FeedbackLedger ledger(3);
    const double sums[3] = {3.0, 2.0, 2.0};
    for (int a = 0; a < 3; ++a) {
        for (int i = 0; i < 4; ++i) ledger.register_pull(a);
        ledger.apply_delivery(arm_batch(3, a, 4, sums[a]));
    }
    const ConfidenceRegion region = fcucb_region(ledger, cfg);
    // The radius sqrt(log(2400)/4) ~ 1.39 swamps [0,1]; the region clips.
    for (int a = 0; a < 3; ++a) {
        CHECK(region.lower[static_cast<std::size_t>(a)] == 0.0);
        CHECK(region.upper[static_cast<std::size_t>(a)] == 1.0);
    }
    const std::vector<double> solved = maximize_over_region(cfg.merit, region, 2, cfg.solver);
    const std::vector<double> gridded = grid_oracle(cfg.merit, region, 2, 0.01);
    CHECK(fair_reward_objective(cfg.merit, solved, 2) >=
          fair_reward_objective(cfg.merit, gridded, 2) - 1e-4);
}

TEST_CASE("fcucb region tightens around informative statistics") {
    PolicyConfig cfg = small_config(3, 2, 100);
    FeedbackLedger ledger(3);
    for (int a = 0; a < 3; ++a) {
        for (int i = 0; i < 3000; ++i) ledger.register_pull(a);
        ledger.apply_delivery(arm_batch(3, a, 3000, 1000.0 * (a + 1)));
    }
    const ConfidenceRegion region = fcucb_region(ledger, cfg);
    region.validate();
    const double c = confidence_radius(ConfidenceKind::observed, 3000, 3000, 3, 2, 100);
    for (int a = 0; a < 3; ++a) {
        const double mean = (a + 1) / 3.0;
        CHECK(region.lower[static_cast<std::size_t>(a)] == doctest::Approx(mean - c).epsilon(1e-12));
        CHECK(region.upper[static_cast<std::size_t>(a)] ==
              doctest::Approx(std::min(mean + c, 1.0)).epsilon(1e-12));
    }
}

TEST_CASE("fcts vector: symmetric priors select uniformly on average") {
    const MeritFunction f = MeritFunction::power_plus(1.0, 2.0, 4.0);
    const std::vector<BetaPosterior> priors(7);
    Rng rng(44);
    std::vector<double> mean(7, 0.0);
    const int draws = 100'000;
    for (int i = 0; i < draws; ++i) {
        const std::vector<double> p = fcts_vector(f, priors, 3, rng);
        double sum = 0.0;
        for (std::size_t a = 0; a < p.size(); ++a) {
            mean[a] += p[a];
            sum += p[a];
        }
        if (i % 1000 == 0) REQUIRE(std::abs(sum - 3.0) <= 1e-12);
    }
    for (double& m : mean) m /= draws;
    for (double m : mean) CHECK(std::abs(m - 3.0 / 7.0) <= 0.01);
}

TEST_CASE("concentrated posterior samples near its mean") {
    BetaPosterior sharp{1'000'000.0, 1.0};
    Rng rng(45);
    for (int i = 0; i < 10'000; ++i) REQUIRE(sharp.sample(rng) >= 0.99);
}

TEST_CASE("op-fcts vector matches fcts when nothing is outstanding") {
    const MeritFunction f = MeritFunction::power_plus(1.0, 2.0, 4.0);
    // Informed N = M state: per-arm (ones, zeros) pairs.
    const std::vector<std::pair<std::int64_t, std::int64_t>> counts = {
        {9, 3}, {4, 8}, {6, 6}, {11, 1}, {2, 10}, {7, 5}, {5, 7}};
    std::vector<BetaPosterior> plain;
    std::vector<std::pair<BetaPosterior, BetaPosterior>> paired;
    for (const auto& [ones, zeros] : counts) {
        BetaPosterior post;
        post.update(ones, zeros);
        plain.push_back(post);
        paired.push_back(op_posteriors(ones + zeros, ones + zeros, ones, zeros));
    }
    const int draws = 30'000;
    std::vector<double> mean_a(7, 0.0), mean_b(7, 0.0), sq_a(7, 0.0), sq_b(7, 0.0);
    Rng rng_a(46), rng_b(47);
    for (int i = 0; i < draws; ++i) {
        const std::vector<double> pa = fcts_vector(f, plain, 3, rng_a);
        const std::vector<double> pb = opfcts_vector(f, paired, 3, rng_b);
        for (std::size_t a = 0; a < 7; ++a) {
            mean_a[a] += pa[a];
            sq_a[a] += pa[a] * pa[a];
            mean_b[a] += pb[a];
            sq_b[a] += pb[a] * pb[a];
        }
    }
    for (std::size_t a = 0; a < 7; ++a) {
        CHECK(std::abs(mean_a[a] / draws - mean_b[a] / draws) <= 0.02);
        CHECK(std::abs(sq_a[a] / draws - sq_b[a] / draws) <= 0.02);
    }
}

TEST_CASE("every policy emits valid selection vectors and replays deterministically") {
    for (PolicyKind kind : all_policy_kinds()) {
        CAPTURE(to_string(kind));
        PolicyConfig cfg = small_config(5, 2, 60);
        auto policy = make_policy(kind, cfg);
        auto replay = make_policy(kind, cfg);
        Rng rng(48), replay_rng(48), env_rng(49);

        for (std::int64_t t = 1; t <= 60; ++t) {
            const Policy::Decision a = policy->select(t, rng);
            const Policy::Decision b = replay->select(t, replay_rng);
            REQUIRE(a.selection == b.selection);
            REQUIRE(a.arms == b.arms);

            REQUIRE(static_cast<int>(a.arms.size()) == 2);
            REQUIRE(is_selection_vector(a.selection, 2));
            REQUIRE(std::is_sorted(a.arms.begin(), a.arms.end()));

            // Zero-delay Bernoulli feedback on the selected arms.
            DeliveryBatch batch(5);
            batch.round = t;
            for (int arm : a.arms) {
                batch.per_arm[static_cast<std::size_t>(arm)].arrived_count = 1;
                batch.per_arm[static_cast<std::size_t>(arm)].reward_sum =
                    env_rng.bernoulli(0.2 * (arm + 1)) ? 1.0 : 0.0;
            }
            policy->observe(batch);
            replay->observe(batch);
        }
    }
}

TEST_CASE("ucb policies play the forced init schedule first") {
    for (PolicyKind kind : {PolicyKind::fcucb_d, PolicyKind::op_fcucb_d, PolicyKind::cucb_d}) {
        CAPTURE(to_string(kind));
        PolicyConfig cfg = small_config(7, 3, 50);
        auto policy = make_policy(kind, cfg);
        Rng rng(50);
        const auto schedule = init_schedule(7, 3);
        for (std::size_t r = 0; r < schedule.size(); ++r) {
            const Policy::Decision d = policy->select(static_cast<std::int64_t>(r + 1), rng);
            REQUIRE(d.arms == schedule[r]);
            for (int arm : schedule[r])
                REQUIRE(d.selection[static_cast<std::size_t>(arm)] == 1.0);
            policy->observe(DeliveryBatch(7));
        }
        // After init every arm has been pulled at least once.
        for (int a = 0; a < 7; ++a) REQUIRE(policy->ledger().pulls(a) >= 1);
    }
}

TEST_CASE("identical statistics give the uniform fair vector") {
    // With no feedback every arm shares the clipped region [0,1]; the
    // objective is maximized only where every coordinate is 1, so the fair
    // vector is L/K across arms.
    PolicyConfig cfg = small_config(7, 3, 50);
    auto policy = make_policy(PolicyKind::fcucb_d, cfg);
    Rng rng(54);
    for (std::int64_t t = 1; t <= 3; ++t) {
        policy->select(t, rng);
        policy->observe(DeliveryBatch(7));
    }
    const Policy::Decision d = policy->select(4, rng);
    for (double p : d.selection) CHECK(p == doctest::Approx(3.0 / 7.0).epsilon(1e-9));
}

TEST_CASE("cucb is a deterministic top-L rule") {
    PolicyConfig cfg = small_config(3, 2, 100);
    auto policy = make_policy(PolicyKind::cucb_d, cfg);
    Rng rng(51);
    policy->select(1, rng);
    policy->observe(DeliveryBatch(3));
    policy->select(2, rng);
    policy->observe(DeliveryBatch(3));
    // Ledger: one pull per arm and change, nothing received; all UCBs equal,
    // ties resolve to the lowest indices.
    const Policy::Decision d = policy->select(3, rng);
    CHECK(d.arms == std::vector<int>{0, 1});
    CHECK(d.selection == std::vector<double>{1.0, 1.0, 0.0});
}

TEST_CASE("fgreedy splits exploration and fair exploitation") {
    SUBCASE("pure exploitation with uniform means is the uniform fair vector") {
        PolicyConfig cfg = small_config(4, 2, 100);
        cfg.fgreedy_epsilon = 0.0;
        auto policy = make_policy(PolicyKind::fgreedy_d, cfg);
        Rng rng(52);
        const Policy::Decision d = policy->select(1, rng);
        for (double p : d.selection) CHECK(p == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("pure exploration uses the L/K marginal and uniform sets") {
        PolicyConfig cfg = small_config(4, 2, 100);
        cfg.fgreedy_epsilon = 1.0;
        auto policy = make_policy(PolicyKind::fgreedy_d, cfg);
        Rng rng(53);
        std::vector<int> hits(4, 0);
        const int rounds = 20'000;
        for (int t = 1; t <= rounds; ++t) {
            const Policy::Decision d = policy->select(t, rng);
            REQUIRE(d.arms.size() == 2);
            for (double p : d.selection) REQUIRE(p == 0.5);
            for (int arm : d.arms) hits[static_cast<std::size_t>(arm)] += 1;
            policy->observe(DeliveryBatch(4));
        }
        for (int h : hits)
            CHECK(static_cast<double>(h) / rounds == doctest::Approx(0.5).epsilon(0.04));
    }
}

TEST_CASE("policy kind names round-trip and unknown names are listed") {
    for (PolicyKind kind : all_policy_kinds())
        CHECK(policy_kind_from_string(to_string(kind)) == kind);
    CHECK_THROWS_WITH_AS(policy_kind_from_string("ucb1"),
                         doctest::Contains("valid kinds"), std::invalid_argument);
}

}  // TEST_SUITE

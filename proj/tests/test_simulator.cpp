#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "cmab/errors.hpp"
#include "cmab/experiment.hpp"
#include "cmab/simulator.hpp"
#include "cmab/smoothness.hpp"

using namespace cmab;

namespace {

ProblemInstance linear_instance(std::vector<double> p, int budget) {
    ProblemInstance inst;
    inst.name = "lin";
    inst.family = {FamilyKind::linear, 1.0, {1.0}};
    const auto arms = p.size();
    inst.params = Matrix(1, arms, std::move(p));
    inst.actions = ActionSpace::budget(static_cast<int>(arms), budget);
    inst.validate();
    return inst;
}

// Eight arms, three unit-weight PMC items, K = 2; every arm has minimal gap
// 0.1 and maximal gap 0.5.
std::pair<ProblemInstance, GapTable> bound_fixture() {
    ProblemInstance inst;
    inst.name = "fixture";
    inst.family = {FamilyKind::pmc, 1.0, {1.0, 1.0, 1.0}};
    inst.params = Matrix(3, 8, 0.5);
    inst.actions = ActionSpace::budget(8, 2);
    GapTable gaps;
    gaps.delta_min.assign(8, 0.1);
    gaps.delta_max.assign(8, 0.5);
    gaps.delta_max_overall = 0.5;
    return {inst, gaps};
}

RegretCurve curve_of(std::vector<double> values, std::string policy = "bc-ucb") {
    return {{0, std::move(policy), "x", 1.0, 1.0}, std::move(values)};
}

} // namespace

TEST(RunEpisode, SingleRound) {
    const auto inst = make_preset("pmc-small");
    const auto traj = run_episode(inst, {PolicyKind::bc_ucb, OracleKind::exact, 1, 5, 1.0});
    ASSERT_EQ(traj.horizon(), 1);
    EXPECT_EQ(traj.rounds[0].t, 1);
    EXPECT_EQ(traj.rounds[0].action, (ArmSet{0, 1}));
    EXPECT_NEAR(traj.rounds[0].expected_reward, expected_reward(inst, {0, 1}), 1e-15);
}

TEST(RunEpisode, Deterministic) {
    const auto inst = make_preset("logistic-small");
    const EpisodeSpec spec{PolicyKind::cucb, OracleKind::greedy, 300, 77, 1.0 - 1.0 / std::numbers::e};
    const auto a = run_episode(inst, spec);
    const auto b = run_episode(inst, spec);
    ASSERT_EQ(a.horizon(), b.horizon());
    for (std::size_t t = 0; t < a.rounds.size(); ++t) {
        EXPECT_EQ(a.rounds[t].action, b.rounds[t].action);
        EXPECT_EQ(a.rounds[t].expected_reward, b.rounds[t].expected_reward);
    }
    EXPECT_THROW(run_episode(inst, {PolicyKind::cucb, OracleKind::greedy, 0, 1, 1.0}), DomainError);
}

TEST(RunEpisode, TrueParamsHasNoRegret) {
    const auto inst = make_preset("pmc-small");
    const auto traj = run_episode(inst, {PolicyKind::true_params, OracleKind::exact, 200, 3, 1.0});
    const auto curve = approximation_regret(traj, inst, 1.0, 1.0);
    for (double r : curve.cumulative) EXPECT_NEAR(r, 0.0, 1e-9);
    const auto table = compute_gaps(inst, 1.0, 1.0);
    for (const auto& round : traj.rounds) EXPECT_EQ(round.action, table.best_action);
}

TEST(ApproximationRegret, ZeroWhenOptimumAlwaysPlayed) {
    const auto inst = linear_instance({0.2, 0.9, 0.4}, 1);
    Trajectory traj;
    for (int t = 1; t <= 10; ++t) traj.rounds.push_back({t, {1}, 0.9, 0.0});
    const auto curve = approximation_regret(traj, inst, 1.0, 1.0);
    for (double r : curve.cumulative) EXPECT_DOUBLE_EQ(r, 0.0);

    const double alpha = 1.0 - 1.0 / std::numbers::e;
    const auto scaled = approximation_regret(traj, inst, alpha, 1.0);
    for (std::size_t t = 0; t < scaled.cumulative.size(); ++t)
        EXPECT_NEAR(scaled.cumulative[t], (alpha - 1.0) * 0.9 * static_cast<double>(t + 1), 1e-12);
}

TEST(ApproximationRegret, HandComputed) {
    const auto inst = linear_instance({0.2, 0.5, 0.9}, 1);
    Trajectory traj;
    traj.rounds.push_back({1, {0}, 0.2, 0.0});
    traj.rounds.push_back({2, {1}, 0.5, 0.0});
    traj.rounds.push_back({3, {2}, 0.9, 0.0});
    traj.rounds.push_back({4, {0}, 0.2, 0.0});
    const auto curve = approximation_regret(traj, inst, 1.0, 0.5);
    const std::vector<double> expected{0.25, 0.2, -0.25, 0.0};
    ASSERT_EQ(curve.cumulative.size(), 4u);
    for (std::size_t t = 0; t < 4; ++t) EXPECT_NEAR(curve.cumulative[t], expected[t], 1e-15);
    EXPECT_THROW(approximation_regret(traj, inst, 0.0, 1.0), DomainError);
}

TEST(ApproximationRegret, IncrementsBoundedByGaps) {
    const auto inst = make_preset("pmc-small");
    const auto table = compute_gaps(inst, 1.0, 1.0);
    const double worst = *std::max_element(table.delta.begin(), table.delta.end());
    for (PolicyKind kind : {PolicyKind::bc_ucb, PolicyKind::cucb, PolicyKind::uniform}) {
        const auto traj = run_episode(inst, {kind, OracleKind::exact, 500, 9, 1.0});
        const auto curve = approximation_regret(traj, inst, 1.0, 1.0);
        double previous = 0.0;
        for (double r : curve.cumulative) {
            EXPECT_GE(r - previous, -1e-12);
            EXPECT_LE(r - previous, worst + 1e-12);
            previous = r;
        }
    }
}

TEST(RegretBound, FrozenValues) {
    const auto [inst, gaps] = bound_fixture();
    const SmoothnessParams pmc{1.0, 1.0 / std::sqrt(std::numbers::e)};
    EXPECT_NEAR(regret_bound(inst, gaps, pmc, 10'000, BoundMode::thm1), 21274103.5788087230517, 1e-6);
    EXPECT_NEAR(regret_bound(inst, gaps, pmc, 10'000, BoundMode::cor1), 515916.720054336444, 1e-7);
    EXPECT_NEAR(regret_bound(inst, gaps, pmc, 1'000'000, BoundMode::cor1), 3949704.26944641080, 1e-6);
}

TEST(RegretBound, MonotoneInHorizon) {
    const auto [inst, gaps] = bound_fixture();
    const SmoothnessParams s{1.0, 0.5};
    for (BoundMode mode : {BoundMode::thm1, BoundMode::cor1}) {
        double previous = 0.0;
        for (std::int64_t t = 2; t <= 100'000'000; t *= 3) {
            const double b = regret_bound(inst, gaps, s, t, mode);
            EXPECT_GT(b, previous);
            previous = b;
        }
    }
}

TEST(RegretBound, Errors) {
    auto [inst, gaps] = bound_fixture();
    const SmoothnessParams s{1.0, 0.5};
    EXPECT_THROW(regret_bound(inst, gaps, s, 1, BoundMode::thm1), DomainError);
    gaps.delta_max_overall.reset();
    EXPECT_THROW(regret_bound(inst, gaps, s, 100, BoundMode::cor1), DataError);
    EXPECT_THROW(parse_bound_mode("thm2"), ConfigError);
}

TEST(RegretBound, SkipsArmsWithoutPositiveGaps) {
    auto [inst, gaps] = bound_fixture();
    const SmoothnessParams s{1.0, 0.5};
    const double full = regret_bound(inst, gaps, s, 1000, BoundMode::thm1);
    gaps.delta_min[3].reset();
    gaps.delta_max[3].reset();
    const double skipped = regret_bound(inst, gaps, s, 1000, BoundMode::thm1);
    const double per_arm = (8640.0 * 0.25 * 9.0 / 0.1 + 340.0 * 3.0 * (1.0 + std::log(5.0))) *
                           std::log(1000.0);
    EXPECT_NEAR(full - skipped, per_arm, 1e-6);
}

TEST(LogBudgetFactor, ClampedAtOne) {
    EXPECT_EQ(log_budget_factor(1), 1);
    EXPECT_EQ(log_budget_factor(2), 1);
    EXPECT_EQ(log_budget_factor(5), 1);
    EXPECT_EQ(log_budget_factor(6), 2);
    EXPECT_EQ(log_budget_factor(25), 2);
    EXPECT_EQ(log_budget_factor(26), 3);
    EXPECT_THROW(log_budget_factor(0), DomainError);
}

TEST(Aggregate, SingleCurve) {
    const std::vector<RegretCurve> curves{curve_of({1.0, 2.0, 4.0})};
    const auto s = aggregate(curves);
    EXPECT_EQ(s.mean, (std::vector<double>{1.0, 2.0, 4.0}));
    EXPECT_EQ(s.stddev, (std::vector<double>{0.0, 0.0, 0.0}));
    for (const auto& [q, v] : s.final_quantiles) EXPECT_DOUBLE_EQ(v, 4.0);
}

TEST(Aggregate, PopulationStd) {
    const std::vector<RegretCurve> curves{curve_of({1.0}), curve_of({3.0})};
    const auto s = aggregate(curves);
    EXPECT_DOUBLE_EQ(s.mean[0], 2.0);
    EXPECT_DOUBLE_EQ(s.stddev[0], 1.0);
    EXPECT_DOUBLE_EQ(s.final_quantiles.at(0.5), 2.0);
    EXPECT_DOUBLE_EQ(s.final_quantiles.at(0.25), 1.5);
}

TEST(Aggregate, MatchesStreamingRecomputation) {
    const auto inst = make_preset("linear-small");
    const auto seeds = derive_seeds(4, 20);
    const EpisodeSpec base{PolicyKind::bc_ucb, OracleKind::greedy, 400, 0, 1.0};
    const auto curves = run_episodes(inst, base, seeds, 1.0, 3);
    const auto s = aggregate(curves);
    for (std::size_t t = 0; t < 400; t += 37) {
        double mean = 0.0;
        double m2 = 0.0;
        int n = 0;
        for (const auto& c : curves) {
            ++n;
            const double d = c.cumulative[t] - mean;
            mean += d / n;
            m2 += d * (c.cumulative[t] - mean);
        }
        EXPECT_NEAR(s.mean[t], mean, 1e-9);
        EXPECT_NEAR(s.stddev[t], std::sqrt(m2 / n), 1e-9);
    }
}

TEST(Aggregate, RejectsMixedCurves) {
    const std::vector<RegretCurve> policies{curve_of({1.0}, "bc-ucb"), curve_of({1.0}, "cucb")};
    EXPECT_THROW(aggregate(policies), DataError);
    const std::vector<RegretCurve> lengths{curve_of({1.0}), curve_of({1.0, 2.0})};
    EXPECT_THROW(aggregate(lengths), DataError);
    EXPECT_THROW(aggregate(std::span<const RegretCurve>{}), DataError);
}

TEST(RunEpisodes, IndependentOfWorkerCount) {
    const auto inst = make_preset("pmc-small");
    const auto seeds = derive_seeds(2, 6);
    const EpisodeSpec base{PolicyKind::bc_ucb, OracleKind::exact, 200, 0, 1.0};
    const auto serial = run_episodes(inst, base, seeds, 1.0, 1);
    const auto parallel = run_episodes(inst, base, seeds, 1.0, 4);
    ASSERT_EQ(serial.size(), parallel.size());
    for (std::size_t k = 0; k < serial.size(); ++k) {
        EXPECT_EQ(serial[k].meta.seed, seeds[k]);
        EXPECT_EQ(serial[k].cumulative, parallel[k].cumulative);
    }
}

TEST(EpisodeSeed, DistinctPerIndex) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t k = 0; k < 1000; ++k) seen.insert(episode_seed(1, k));
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_NE(episode_seed(1, 0), episode_seed(2, 0));
}

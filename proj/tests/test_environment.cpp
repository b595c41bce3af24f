#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cmab/environment.hpp"
#include "cmab/errors.hpp"
#include "cmab/instance_io.hpp"

using namespace cmab;

namespace {

ProblemInstance make_instance(FamilyKind kind, Matrix params, int budget,
                              std::vector<double> weights = {}, double c = 1.0) {
    ProblemInstance inst;
    inst.name = "test";
    if (weights.empty()) weights.assign(params.rows(), 1.0);
    inst.family = {kind, c, std::move(weights)};
    inst.actions = ActionSpace::budget(static_cast<int>(params.cols()), budget);
    inst.params = std::move(params);
    inst.validate();
    return inst;
}

Matrix random_params(std::size_t items, std::size_t arms, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Matrix m(items, arms, 0.0);
    for (std::size_t i = 0; i < items; ++i)
        for (std::size_t j = 0; j < arms; ++j) m(i, j) = unit(rng);
    return m;
}

// Independent PMC reward over a bitmask of arms.
double pmc_mask_reward(const Matrix& p, unsigned mask) {
    double total = 0.0;
    for (std::size_t i = 0; i < p.rows(); ++i) {
        double miss = 1.0;
        for (std::size_t j = 0; j < p.cols(); ++j)
            if (mask & (1u << j)) miss *= 1.0 - p(i, j);
        total += 1.0 - miss;
    }
    return total;
}

} // namespace

TEST(ExpectedReward, PmcTwoArms) {
    const auto inst = make_instance(FamilyKind::pmc, Matrix(1, 2, {0.5, 0.5}), 2);
    EXPECT_DOUBLE_EQ(expected_reward(inst, {0, 1}), 0.75);
}

TEST(ExpectedReward, CertainCoverageGivesTotalWeight) {
    const auto inst =
        make_instance(FamilyKind::pmc, Matrix(2, 3, {1.0, 0.2, 0.0, 0.1, 1.0, 0.0}), 2, {2.0, 0.5});
    EXPECT_DOUBLE_EQ(expected_reward(inst, {0, 1}), 2.5);
}

TEST(ExpectedReward, LogisticAtZero) {
    const auto inst =
        make_instance(FamilyKind::logistic, Matrix(2, 2, 0.0), 2, {1.0, 3.0}, 1.0);
    EXPECT_DOUBLE_EQ(expected_reward(inst, {0, 1}), 2.0);
}

TEST(ExpectedReward, RejectsInfeasibleAction) {
    const auto inst = make_instance(FamilyKind::linear, Matrix(1, 4, 0.5), 2);
    EXPECT_THROW(expected_reward(inst, {0, 1, 2}), DomainError);
    EXPECT_THROW(expected_reward(inst, {}), DomainError);
    EXPECT_THROW(expected_reward(inst, {4}), DomainError);
}

TEST(ExpectedReward, MonotoneUnderSupersets) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        for (FamilyKind kind : {FamilyKind::pmc, FamilyKind::logistic, FamilyKind::linear}) {
            const auto inst = make_instance(kind, random_params(3, 5, rng), 5, {}, 2.0);
            for (const auto& a : inst.actions.enumerate()) {
                for (int j = 0; j < 5; ++j) {
                    if (std::find(a.begin(), a.end(), j) != a.end()) continue;
                    ArmSet b = a;
                    b.push_back(j);
                    std::sort(b.begin(), b.end());
                    EXPECT_LE(expected_reward(inst, a), expected_reward(inst, b) + 1e-12);
                }
            }
        }
    }
}

TEST(ExpectedReward, PmcIsSubmodular) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix p = random_params(3, 5, rng);
        for (unsigned s = 0; s < 32; ++s) {
            for (unsigned t = s;; t = (t + 1) | s) {
                for (unsigned j = 0; j < 5; ++j) {
                    const unsigned bit = 1u << j;
                    if (t & bit) continue;
                    const double gain_s = pmc_mask_reward(p, s | bit) - pmc_mask_reward(p, s);
                    const double gain_t = pmc_mask_reward(p, t | bit) - pmc_mask_reward(p, t);
                    EXPECT_GE(gain_s, gain_t - 1e-12);
                }
                if (t == 31) break;
            }
        }
    }
}

TEST(SampleFeedback, DegenerateParameters) {
    Rng rng(1);
    const auto zeros = make_instance(FamilyKind::pmc, Matrix(3, 4, 0.0), 2);
    const auto ones = make_instance(FamilyKind::pmc, Matrix(3, 4, 1.0), 2);
    for (int round = 0; round < 100; ++round) {
        EXPECT_EQ(sample_feedback(zeros, {1, 3}, rng), Matrix(3, 2, 0.0));
        EXPECT_EQ(sample_feedback(ones, {0, 2}, rng), Matrix(3, 2, 1.0));
    }
}

TEST(SampleFeedback, MeanWithinThreeSigma) {
    Rng rng(2);
    const auto inst = make_instance(FamilyKind::pmc, Matrix(1, 1, 0.3), 1);
    const int n = 100000;
    double sum = 0.0;
    for (int round = 0; round < n; ++round) sum += sample_feedback(inst, {0}, rng)(0, 0);
    EXPECT_NEAR(sum / n, 0.3, 3.0 * std::sqrt(0.21 / n));
}

TEST(SampleFeedback, SharedDrawsAreNested) {
    Rng rng(3);
    auto inst = make_instance(FamilyKind::pmc, Matrix(2, 1, {0.3, 0.6}), 1);
    inst.correlation = Correlation::shared_per_arm;
    int low_hits = 0;
    for (int round = 0; round < 2000; ++round) {
        const Matrix x = sample_feedback(inst, {0}, rng);
        EXPECT_LE(x(0, 0), x(1, 0));
        low_hits += static_cast<int>(x(0, 0));
    }
    EXPECT_GT(low_hits, 0);
}

TEST(SampleFeedback, SeedDeterminism) {
    std::mt19937_64 prng(9);
    const auto inst = make_instance(FamilyKind::pmc, random_params(4, 5, prng), 3);
    Rng a(42), b(42);
    for (int round = 0; round < 50; ++round)
        EXPECT_EQ(sample_feedback(inst, {0, 2, 4}, a), sample_feedback(inst, {0, 2, 4}, b));
}

TEST(ComputeGaps, MatchesBruteForce) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix p = random_params(4, 6, rng);
        const auto inst = make_instance(FamilyKind::pmc, p, 2);
        const auto table = compute_gaps(inst, 1.0, 1.0);

        double r_max = 0.0;
        for (unsigned mask = 1; mask < 64; ++mask)
            if (std::popcount(mask) <= 2) r_max = std::max(r_max, pmc_mask_reward(p, mask));
        EXPECT_NEAR(table.r_max, r_max, 1e-12);
        EXPECT_EQ(table.actions.size(), 21u);

        for (int j = 0; j < 6; ++j) {
            std::optional<double> lo, hi;
            for (unsigned mask = 1; mask < 64; ++mask) {
                if (std::popcount(mask) > 2 || !(mask & (1u << j))) continue;
                const double gap = r_max - pmc_mask_reward(p, mask);
                if (gap <= 1e-12 * std::max(1.0, r_max)) continue;
                lo = lo ? std::min(*lo, gap) : gap;
                hi = hi ? std::max(*hi, gap) : gap;
            }
            ASSERT_EQ(table.delta_min[j].has_value(), lo.has_value());
            if (lo) {
                EXPECT_NEAR(*table.delta_min[j], *lo, 1e-12);
                EXPECT_NEAR(*table.delta_max[j], *hi, 1e-12);
            }
        }
    }
}

TEST(ComputeGaps, EqualRewardsGiveNoPositiveGap) {
    const auto inst = make_instance(FamilyKind::linear, Matrix(1, 4, 0.5), 1);
    const auto table = compute_gaps(inst, 1.0, 1.0);
    for (double d : table.delta) EXPECT_DOUBLE_EQ(d, 0.0);
    for (const auto& d : table.delta_min) EXPECT_FALSE(d.has_value());
    EXPECT_FALSE(table.delta_max_overall.has_value());
    EXPECT_EQ(table.best_action, ArmSet{0});
}

TEST(ComputeGaps, RejectsBadFactors) {
    const auto inst = make_instance(FamilyKind::linear, Matrix(1, 3, 0.5), 1);
    EXPECT_THROW(compute_gaps(inst, 0.0, 1.0), DomainError);
    EXPECT_THROW(compute_gaps(inst, 1.0, 1.5), DomainError);
}

TEST(LowerBoundInstance, Structure) {
    const auto inst = build_lower_bound_instance(5, 2, 0.1, {1.0});
    const std::vector<ArmSet> expected{{0, 1}, {0, 2}, {0, 3}, {0, 4}};
    EXPECT_EQ(inst.actions.explicit_actions(), expected);
    EXPECT_EQ(inst.correlation, Correlation::shared_per_arm);
    EXPECT_NEAR(expected_reward(inst, {0, 1}), 0.4, 1e-15);
    EXPECT_NEAR(expected_reward(inst, {0, 3}), 0.4, 1e-15);
    EXPECT_NEAR(expected_reward(inst, {0, 4}), 0.5, 1e-15);

    const auto table = compute_gaps(inst, 1.0, 1.0);
    EXPECT_EQ(table.best_action, (ArmSet{0, 4}));
    for (int j = 1; j < 4; ++j) EXPECT_NEAR(*table.delta_min[j], 0.1, 1e-12);
    EXPECT_FALSE(table.delta_min[4].has_value());
}

TEST(LowerBoundInstance, RewardSupportIsZeroOrTotalWeight) {
    const auto inst = build_lower_bound_instance(5, 3, 0.2, {1.0, 2.0, 0.5});
    Rng rng(8);
    for (const auto& action : inst.actions.explicit_actions()) {
        for (int round = 0; round < 500; ++round) {
            const Matrix x = sample_feedback(inst, action, rng);
            double reward = 0.0;
            for (std::size_t i = 0; i < x.rows(); ++i)
                reward += inst.family.weights[i] * item_value(inst.family, x.row(i));
            EXPECT_TRUE(reward == 0.0 || reward == 3.5) << reward;
        }
    }
}

TEST(LowerBoundInstance, Errors) {
    EXPECT_THROW(build_lower_bound_instance(5, 2, 0.0, {1.0}), DomainError);
    EXPECT_THROW(build_lower_bound_instance(5, 2, 0.5, {1.0}), DomainError);
    EXPECT_THROW(build_lower_bound_instance(2, 2, 0.1, {1.0}), DomainError);
}

TEST(BernoulliKl, FrozenValues) {
    EXPECT_NEAR(bernoulli_kl(0.3, 0.7), 0.338919144154881445, 1e-12);
    EXPECT_NEAR(bernoulli_kl(0.49, 0.5), 0.000200013335467, 1e-14);
    EXPECT_NEAR(bernoulli_kl(0.45, 0.5), 0.00500836684636, 1e-13);
    EXPECT_NEAR(bernoulli_kl(0.4, 0.5), 0.0201355135507, 1e-12);
    EXPECT_NEAR(bernoulli_kl(0.3, 0.5), 0.0822828785051, 1e-12);
    EXPECT_DOUBLE_EQ(bernoulli_kl(0.4, 0.4), 0.0);
}

TEST(BernoulliKl, BelowFourEpsilonSquared) {
    for (double eps : {0.01, 0.05, 0.1, 0.2}) EXPECT_LE(bernoulli_kl(0.5 - eps, 0.5), 4 * eps * eps);
}

TEST(BernoulliKl, Domain) {
    EXPECT_THROW(bernoulli_kl(0.0, 0.5), DomainError);
    EXPECT_THROW(bernoulli_kl(0.5, 1.0), DomainError);
}

TEST(ActionSpace, EnumerationAndGuards) {
    const auto space = ActionSpace::budget(4, 2);
    EXPECT_EQ(space.enumerate().size(), 10u);
    EXPECT_TRUE(space.contains({0, 3}));
    EXPECT_FALSE(space.contains({0, 1, 2}));
    EXPECT_THROW(ActionSpace::budget(200, 100).enumerate(), CapacityError);
    EXPECT_THROW(ActionSpace::explicit_list(3, 2, {}), DomainError);
    EXPECT_THROW(ActionSpace::explicit_list(3, 2, {{0, 1, 2}}), DomainError);
    EXPECT_THROW(ActionSpace::explicit_list(3, 2, {{0, 0}}), DomainError);
    EXPECT_THROW(ActionSpace::explicit_list(3, 2, {{3}}), DomainError);
}

TEST(InstanceIo, RoundTrip) {
    std::mt19937_64 rng(12);
    auto inst = make_instance(FamilyKind::logistic, random_params(2, 4, rng), 2, {1.0, 0.5}, 3.0);
    const auto back = instance_from_json(instance_to_json(inst));
    EXPECT_EQ(back.params, inst.params);
    EXPECT_EQ(back.family.kind, FamilyKind::logistic);
    EXPECT_DOUBLE_EQ(back.family.c, 3.0);
    EXPECT_EQ(back.family.weights, inst.family.weights);
    EXPECT_TRUE(back.actions.is_budget());
    EXPECT_EQ(back.budget(), 2);

    const auto lb = build_lower_bound_instance(5, 2, 0.1, {1.0});
    const auto lb_back = instance_from_json(instance_to_json(lb));
    EXPECT_EQ(lb_back.actions.explicit_actions(), lb.actions.explicit_actions());
    EXPECT_EQ(lb_back.correlation, Correlation::shared_per_arm);
    EXPECT_EQ(instance_to_json(lb_back), instance_to_json(lb));
}

TEST(InstanceIo, OneBasedIdsInDocuments) {
    const auto doc = instance_to_json(build_lower_bound_instance(3, 2, 0.1, {1.0}));
    EXPECT_EQ(doc["action_set"], nlohmann::json::parse("[[1,2],[1,3]]"));
}

TEST(InstanceIo, Errors) {
    const auto good = nlohmann::json::parse(R"({
        "schema_version": 1, "name": "x", "family": "pmc", "L": 2, "K": 1, "M": 1,
        "weights": [1], "params": [0.2, 0.4], "action_set": "budget",
        "correlation": "independent"})");
    EXPECT_NO_THROW(instance_from_json(good));

    auto bad = good;
    bad["params"] = {0.2, 1.4};
    EXPECT_THROW(instance_from_json(bad), DomainError);
    bad = good;
    bad["params"] = {0.2};
    EXPECT_ANY_THROW(instance_from_json(bad));
    bad = good;
    bad["schema_version"] = 2;
    EXPECT_THROW(instance_from_json(bad), ConfigError);
    bad = good;
    bad.erase("L");
    EXPECT_THROW(instance_from_json(bad), ConfigError);
    bad = good;
    bad["family"] = "cubic";
    EXPECT_ANY_THROW(instance_from_json(bad));
    bad = good;
    bad["weights"] = {-1.0};
    EXPECT_THROW(instance_from_json(bad), DomainError);
    bad = good;
    bad["action_set"] = nlohmann::json::parse("[[3]]");
    EXPECT_THROW(instance_from_json(bad), DomainError);
    EXPECT_ANY_THROW(load_instance("/nonexistent/instance.json"));
}

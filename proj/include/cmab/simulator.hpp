#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmab/environment.hpp"
#include "cmab/oracles.hpp"
#include "cmab/policies.hpp"
#include "cmab/smoothness.hpp"

namespace cmab {

struct RoundRecord {
    std::int64_t t = 0;
    ArmSet action;
    double expected_reward = 0.0;
    double gap = 0.0;  // alpha r_max - expected_reward
};

struct Trajectory {
    std::vector<RoundRecord> rounds;
    std::int64_t horizon() const { return static_cast<std::int64_t>(rounds.size()); }
};

struct EpisodeSpec {
    PolicyKind policy = PolicyKind::bc_ucb;
    OracleKind oracle = OracleKind::greedy;
    std::int64_t horizon = 1;
    std::uint64_t seed = 0;
    double alpha = 1.0;
};

// Plays one episode. Feedback comes from an mt19937_64 seeded with spec.seed,
// so the trajectory is a function of (instance, spec, r_max) alone.
Trajectory run_episode(const ProblemInstance& instance, const EpisodeSpec& spec, double r_max);
Trajectory run_episode(const ProblemInstance& instance, const EpisodeSpec& spec);

struct CurveMeta {
    std::uint64_t seed = 0;
    std::string policy;
    std::string instance;
    double alpha = 1.0;
    double beta = 1.0;
};

struct RegretCurve {
    CurveMeta meta;
    std::vector<double> cumulative;  // R(1), ..., R(T)
};

// Per-round cumulative approximation regret
//   R(t) = sum_{s <= t} (alpha beta r_max - r(A_s; p))
// scored with expected rewards. r_max is found by enumeration when absent.
RegretCurve approximation_regret(const Trajectory& trajectory, const ProblemInstance& instance,
                                 double alpha, double beta,
                                 std::optional<double> r_max = std::nullopt);

enum class BoundMode { thm1, cor1 };

BoundMode parse_bound_mode(std::string_view name);
std::string to_string(BoundMode mode);

// ceil(log K / 1.61), clamped below at 1.
int log_budget_factor(int budget);

// Problem-dependent (thm1) or problem-independent (cor1) regret upper bound for
// BC-UCB at horizon T >= 2. Arms in no positive-gap action contribute no
// per-arm term. Throws DataError when the table has no positive gap.
double regret_bound(const ProblemInstance& instance, const GapTable& gaps,
                    const SmoothnessParams& smoothness, std::int64_t horizon, BoundMode mode);

struct RegretSummary {
    std::vector<double> mean;
    std::vector<double> stddev;  // population convention (divide by n)
    std::map<double, double> final_quantiles;
};

// Pointwise mean and standard deviation, plus quantiles {0, .1, .25, .5, .75,
// .9, 1} of the final regret (linear interpolation between order statistics).
// Throws DataError unless all curves share policy, instance, alpha, beta and
// length.
RegretSummary aggregate(std::span<const RegretCurve> curves);

// Seed for episode `index` of a run with `master` seed (splitmix64 of both).
std::uint64_t episode_seed(std::uint64_t master, std::uint64_t index);

// Runs one episode per seed, spread across `workers` threads, and returns the
// curves in seed order.
std::vector<RegretCurve> run_episodes(const ProblemInstance& instance, const EpisodeSpec& base,
                                      std::span<const std::uint64_t> seeds, double beta,
                                      unsigned workers);

} // namespace cmab

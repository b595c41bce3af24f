#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "cmab/arm_set.hpp"
#include "cmab/matrix.hpp"
#include "cmab/reward.hpp"

namespace cmab {

using Rng = std::mt19937_64;

// Upper limit on exhaustively enumerated action sets.
inline constexpr std::uint64_t kEnumerationLimit = 1'000'000;

// The feasible batches: either every nonempty subset of size <= budget, or
// an explicit list.
class ActionSpace {
public:
    static ActionSpace budget(int arms, int budget);
    // Throws DomainError on empty lists, bad ids, duplicates or |A| > budget.
    static ActionSpace explicit_list(int arms, int budget, std::vector<ArmSet> actions);

    int arms() const { return arms_; }
    int max_size() const { return budget_; }
    bool is_budget() const { return !explicit_.has_value(); }
    const std::vector<ArmSet>& explicit_actions() const;

    bool contains(const ArmSet& action) const;

    // All feasible actions in lexicographic order. Throws CapacityError above
    // kEnumerationLimit.
    std::vector<ArmSet> enumerate() const;

private:
    int arms_ = 0;
    int budget_ = 0;
    std::optional<std::vector<ArmSet>> explicit_;
};

enum class Correlation {
    independent,    // every (item, arm) entry is its own Bernoulli draw
    shared_per_arm  // one uniform per arm, thresholded at each item's p_ij
};

Correlation parse_correlation(std::string_view name);
std::string to_string(Correlation c);

struct ProblemInstance {
    std::string name;
    RewardFamily family;
    Matrix params;  // items x arms, entries in [0,1]
    ActionSpace actions;
    Correlation correlation = Correlation::independent;

    std::size_t items() const { return params.rows(); }
    int arms() const { return static_cast<int>(params.cols()); }
    int budget() const { return actions.max_size(); }

    // Throws DomainError on any broken invariant.
    void validate() const;
};

// r(A; p) on the true parameters. Throws DomainError if A is not feasible.
double expected_reward(const ProblemInstance& instance, const ArmSet& action);

// One round of semi-bandit feedback: items x |A| Bernoulli draws with means
// p_ij, correlated according to instance.correlation.
Matrix sample_feedback(const ProblemInstance& instance, const ArmSet& action, Rng& rng);

// Uniform double in [0,1) from the top 53 bits of one generator output.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct GapTable {
    double alpha = 1.0;
    double beta = 1.0;
    double r_max = 0.0;
    ArmSet best_action;
    std::vector<ArmSet> actions;
    std::vector<double> delta;  // alpha r_max - r(A), per action
    // Extreme positive gaps over actions containing each arm; empty when the
    // arm is in no positive-gap action.
    std::vector<std::optional<double>> delta_min;
    std::vector<std::optional<double>> delta_max;
    std::optional<double> delta_max_overall;
};

// Exact gap table by enumeration of the action space. Gaps at or below a
// relative 1e-12 of r_max count as zero. Throws CapacityError on oversized
// enumerations and DomainError for alpha, beta outside (0,1].
GapTable compute_gaps(const ProblemInstance& instance, double alpha, double beta);

// Largest expected reward over the action space and the lexicographically
// first action attaining it.
std::pair<double, ArmSet> best_action(const ProblemInstance& instance);

// PMC instance with K - 1 empty arms, arms K..L-1 at 1/2 - epsilon and arm L at
// 1/2, actions {empty arms} + {one live arm}, and all items sharing one draw
// per arm. Its reward is total_weight * Bernoulli(p) per action.
ProblemInstance build_lower_bound_instance(int arms, int budget, double epsilon,
                                           std::vector<double> weights);

// Bernoulli KL divergence kl(p, q); p, q in (0,1) strictly.
double bernoulli_kl(double p, double q);

} // namespace cmab

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "cmab/environment.hpp"
#include "cmab/oracles.hpp"
#include "cmab/stats.hpp"

namespace cmab {

enum class PolicyKind {
    bc_ucb,       // empirical Bernstein index
    cucb,         // Hoeffding index
    uniform,      // uniformly random feasible batch
    true_params   // diagnostic: oracle applied to the true parameters
};

// "bc-ucb" | "cucb" | "uniform" | "true-params"
PolicyKind parse_policy(std::string_view name);
std::string to_string(PolicyKind kind);

// min{1, mean + sqrt(3 log t / (2 n))}.
double cucb_value(double mean, std::int64_t n, double log_t);

// Hoeffding index for every sampled arm.
IndexMatrix cucb_index(const CounterState& state, std::int64_t t);

// Batch for the initialization phase, or nothing once every arm is sampled.
//
// Budget spaces: the lowest-id unsampled arms, up to the budget, topped up
// with the lowest-id sampled arms. Explicit spaces: among the actions holding
// the lowest-id unsampled arm, the one with the most unsampled arms, first in
// list order on ties. Throws ConfigError when no action holds that arm.
std::optional<ArmSet> init_action(const CounterState& state, const ActionSpace& space);

// One episode's decision state: counters, round number and, for the uniform
// baseline, its own generator.
class Policy {
public:
    Policy(PolicyKind kind, std::size_t items, std::size_t arms, std::uint64_t seed = 0);
    // Diagnostic policy that always maximizes the given parameters.
    static Policy with_true_params(Matrix params);

    PolicyKind kind() const { return kind_; }
    std::int64_t round() const { return round_; }
    const CounterState& counters() const { return counters_; }

    // Index matrix for the current round; throws StateError before init ends.
    IndexMatrix index() const;

    // Action for round(). Deterministic given the state.
    ArmSet select_action(const RewardFamily& family, const ActionSpace& space,
                         const Oracle& oracle);

    // Commits the feedback of round() and advances to the next round.
    void observe(std::span<const int> action, const Matrix& feedback);

    bool operator==(const Policy& other) const;

private:
    PolicyKind kind_;
    std::int64_t round_ = 1;
    CounterState counters_;
    Rng rng_;
    Matrix true_params_;
};

} // namespace cmab

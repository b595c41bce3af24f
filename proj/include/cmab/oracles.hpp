#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cmab/arm_set.hpp"
#include "cmab/environment.hpp"

namespace cmab {

// Set function evaluated on a sorted batch.
using SetFunction = std::function<double(std::span<const int>)>;

// Greedy maximization under a cardinality budget: starting from the empty set,
// add the arm with the largest value of evaluate(current + {j}), lowest id on
// ties, until `budget` arms are chosen. Always returns exactly `budget` arms.
// Throws DomainError if budget > arms or budget < 1.
ArmSet greedy_oracle(const SetFunction& evaluate, int arms, int budget);

// Maximizer of evaluate over `actions`, lexicographically smallest on ties.
// Throws DomainError on an empty list.
ArmSet exact_oracle(const SetFunction& evaluate, std::span<const ArmSet> actions);

enum class OracleKind { greedy, exact };

OracleKind parse_oracle(std::string_view name);
std::string to_string(OracleKind kind);

// Oracle bound to an action space. Exact mode over a budget space searches the
// batches of exactly min(budget, arms) arms, which suffices for monotone
// rewards; greedy mode needs a budget space.
class Oracle {
public:
    // Throws ConfigError for greedy over an explicit list and CapacityError
    // when exact enumeration is too large.
    Oracle(OracleKind kind, const ActionSpace& space);

    OracleKind kind() const { return kind_; }
    ArmSet operator()(const SetFunction& evaluate) const;

private:
    OracleKind kind_;
    int arms_;
    int budget_;
    std::vector<ArmSet> candidates_;
};

} // namespace cmab

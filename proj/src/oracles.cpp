#include "cmab/oracles.hpp"

#include <algorithm>

#include "cmab/errors.hpp"

namespace cmab {

ArmSet greedy_oracle(const SetFunction& evaluate, int arms, int budget) {
    if (budget < 1) throw DomainError("greedy oracle needs budget >= 1");
    if (budget > arms) throw DomainError("greedy oracle budget exceeds the number of arms");

    std::vector<bool> chosen(static_cast<std::size_t>(arms), false);
    ArmSet current;
    ArmSet candidate;
    for (int step = 0; step < budget; ++step) {
        int best_arm = -1;
        double best_value = 0.0;
        for (int j = 0; j < arms; ++j) {
            if (chosen[static_cast<std::size_t>(j)]) continue;
            candidate = current;
            candidate.insert(std::upper_bound(candidate.begin(), candidate.end(), j), j);
            const double value = evaluate(candidate);
            if (best_arm < 0 || value > best_value) {
                best_arm = j;
                best_value = value;
            }
        }
        chosen[static_cast<std::size_t>(best_arm)] = true;
        current.insert(std::upper_bound(current.begin(), current.end(), best_arm), best_arm);
    }
    return current;
}

ArmSet exact_oracle(const SetFunction& evaluate, std::span<const ArmSet> actions) {
    if (actions.empty()) throw DomainError("exact oracle needs at least one action");
    const ArmSet* best = nullptr;
    double best_value = 0.0;
    for (const auto& a : actions) {
        const double value = evaluate(a);
        if (!best || value > best_value || (value == best_value && a < *best)) {
            best = &a;
            best_value = value;
        }
    }
    return *best;
}

OracleKind parse_oracle(std::string_view name) {
    if (name == "greedy") return OracleKind::greedy;
    if (name == "exact") return OracleKind::exact;
    throw ConfigError("unknown oracle '" + std::string(name) + "'");
}

std::string to_string(OracleKind kind) { return kind == OracleKind::greedy ? "greedy" : "exact"; }

Oracle::Oracle(OracleKind kind, const ActionSpace& space)
    : kind_(kind), arms_(space.arms()), budget_(space.max_size()) {
    if (kind == OracleKind::greedy) {
        if (!space.is_budget()) throw ConfigError("greedy oracle needs a budget action set");
        return;
    }
    if (space.is_budget()) {
        const int size = std::min(budget_, arms_);
        if (count_subsets_up_to(arms_, size) > kEnumerationLimit) {
            throw CapacityError("exact oracle enumeration exceeds the limit");
        }
        candidates_ = enumerate_subsets(arms_, size);
    } else {
        candidates_ = space.explicit_actions();
    }
}

ArmSet Oracle::operator()(const SetFunction& evaluate) const {
    if (kind_ == OracleKind::greedy) return greedy_oracle(evaluate, arms_, std::min(budget_, arms_));
    return exact_oracle(evaluate, candidates_);
}

} // namespace cmab

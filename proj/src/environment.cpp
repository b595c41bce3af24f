#include "cmab/environment.hpp"

#include <algorithm>
#include <cmath>

#include "cmab/errors.hpp"

namespace cmab {

ActionSpace ActionSpace::budget(int arms, int budget) {
    if (arms < 1) throw DomainError("need at least one arm");
    if (budget < 1 || budget > arms) throw DomainError("budget must lie in [1, L]");
    ActionSpace s;
    s.arms_ = arms;
    s.budget_ = budget;
    return s;
}

ActionSpace ActionSpace::explicit_list(int arms, int budget, std::vector<ArmSet> actions) {
    if (arms < 1) throw DomainError("need at least one arm");
    if (budget < 1) throw DomainError("budget must be >= 1");
    if (actions.empty()) throw DomainError("explicit action list is empty");
    for (auto& a : actions) {
        if (a.empty()) throw DomainError("explicit actions must be nonempty");
        a = make_arm_set(std::move(a), arms);
        if (static_cast<int>(a.size()) > budget) {
            throw DomainError("action " + format_arm_set(a) + " exceeds the budget");
        }
    }
    ActionSpace s;
    s.arms_ = arms;
    s.budget_ = budget;
    s.explicit_ = std::move(actions);
    return s;
}

const std::vector<ArmSet>& ActionSpace::explicit_actions() const {
    if (!explicit_) throw StateError("budget action space has no explicit list");
    return *explicit_;
}

bool ActionSpace::contains(const ArmSet& action) const {
    if (action.empty() || static_cast<int>(action.size()) > budget_) return false;
    if (!std::is_sorted(action.begin(), action.end()) ||
        std::adjacent_find(action.begin(), action.end()) != action.end()) {
        return false;
    }
    if (action.front() < 0 || action.back() >= arms_) return false;
    if (!explicit_) return true;
    return std::find(explicit_->begin(), explicit_->end(), action) != explicit_->end();
}

std::vector<ArmSet> ActionSpace::enumerate() const {
    if (explicit_) {
        std::vector<ArmSet> out = *explicit_;
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    if (count_subsets_up_to(arms_, budget_) > kEnumerationLimit) {
        throw CapacityError("budget action space exceeds the enumeration limit of " +
                            std::to_string(kEnumerationLimit));
    }
    std::vector<ArmSet> out;
    for (int size = 1; size <= budget_; ++size) {
        auto part = enumerate_subsets(arms_, size);
        out.insert(out.end(), part.begin(), part.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

Correlation parse_correlation(std::string_view name) {
    if (name == "independent") return Correlation::independent;
    if (name == "shared-per-arm") return Correlation::shared_per_arm;
    throw DomainError("unknown correlation '" + std::string(name) + "'");
}

std::string to_string(Correlation c) {
    return c == Correlation::independent ? "independent" : "shared-per-arm";
}

void ProblemInstance::validate() const {
    family.validate();
    if (params.rows() != family.weights.size()) {
        throw DomainError("parameter matrix must have one row per item weight");
    }
    if (static_cast<int>(params.cols()) != actions.arms()) {
        throw DomainError("parameter matrix must have one column per arm");
    }
    for (double p : params.data()) {
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("parameters must lie in [0,1]");
    }
}

double expected_reward(const ProblemInstance& instance, const ArmSet& action) {
    if (!instance.actions.contains(action)) {
        throw DomainError("action " + format_arm_set(action) + " is not in the action set");
    }
    return weighted_reward(instance.family, instance.params, action);
}

Matrix sample_feedback(const ProblemInstance& instance, const ArmSet& action, Rng& rng) {
    const std::size_t items = instance.items();
    Matrix x(items, action.size(), 0.0);
    if (instance.correlation == Correlation::independent) {
        for (std::size_t i = 0; i < items; ++i) {
            for (std::size_t k = 0; k < action.size(); ++k) {
                const double p = instance.params(i, static_cast<std::size_t>(action[k]));
                x(i, k) = uniform01(rng) < p ? 1.0 : 0.0;
            }
        }
    } else {
        for (std::size_t k = 0; k < action.size(); ++k) {
            const double draw = uniform01(rng);
            for (std::size_t i = 0; i < items; ++i) {
                const double p = instance.params(i, static_cast<std::size_t>(action[k]));
                x(i, k) = draw < p ? 1.0 : 0.0;
            }
        }
    }
    return x;
}

std::pair<double, ArmSet> best_action(const ProblemInstance& instance) {
    const auto actions = instance.actions.enumerate();
    double best = -1.0;
    ArmSet arg;
    for (const auto& a : actions) {
        const double r = weighted_reward(instance.family, instance.params, a);
        if (r > best) {
            best = r;
            arg = a;
        }
    }
    return {best, arg};
}

GapTable compute_gaps(const ProblemInstance& instance, double alpha, double beta) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0,1]");
    if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("beta must lie in (0,1]");

    GapTable table;
    table.alpha = alpha;
    table.beta = beta;
    table.actions = instance.actions.enumerate();

    std::vector<double> rewards;
    rewards.reserve(table.actions.size());
    table.r_max = -1.0;
    for (const auto& a : table.actions) {
        rewards.push_back(weighted_reward(instance.family, instance.params, a));
        if (rewards.back() > table.r_max) {
            table.r_max = rewards.back();
            table.best_action = a;
        }
    }

    const double zero_tol = 1e-12 * std::max(1.0, table.r_max);
    const auto arms = static_cast<std::size_t>(instance.arms());
    table.delta_min.assign(arms, std::nullopt);
    table.delta_max.assign(arms, std::nullopt);
    for (std::size_t a = 0; a < table.actions.size(); ++a) {
        double gap = alpha * table.r_max - rewards[a];
        if (std::abs(gap) <= zero_tol) gap = 0.0;
        table.delta.push_back(gap);
        if (gap <= 0.0) continue;
        for (int j : table.actions[a]) {
            auto& lo = table.delta_min[static_cast<std::size_t>(j)];
            auto& hi = table.delta_max[static_cast<std::size_t>(j)];
            lo = lo ? std::min(*lo, gap) : gap;
            hi = hi ? std::max(*hi, gap) : gap;
        }
        table.delta_max_overall =
            table.delta_max_overall ? std::max(*table.delta_max_overall, gap) : gap;
    }
    return table;
}

ProblemInstance build_lower_bound_instance(int arms, int budget, double epsilon,
                                           std::vector<double> weights) {
    if (budget < 1) throw DomainError("lower-bound instance needs K >= 1");
    if (arms <= budget) throw DomainError("lower-bound instance needs L > K");
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw DomainError("epsilon must lie in (0, 1/2)");

    ProblemInstance inst;
    inst.name = "lower-bound";
    inst.family = RewardFamily{FamilyKind::pmc, 1.0, std::move(weights)};
    inst.family.validate();
    const std::size_t items = inst.family.weights.size();
    inst.params = Matrix(items, static_cast<std::size_t>(arms), 0.0);
    for (std::size_t i = 0; i < items; ++i) {
        for (int j = budget - 1; j < arms - 1; ++j) {
            inst.params(i, static_cast<std::size_t>(j)) = 0.5 - epsilon;
        }
        inst.params(i, static_cast<std::size_t>(arms - 1)) = 0.5;
    }

    std::vector<ArmSet> actions;
    for (int live = budget - 1; live < arms; ++live) {
        ArmSet a;
        for (int j = 0; j < budget - 1; ++j) a.push_back(j);
        a.push_back(live);
        actions.push_back(std::move(a));
    }
    inst.actions = ActionSpace::explicit_list(arms, budget, std::move(actions));
    inst.correlation = Correlation::shared_per_arm;
    inst.validate();
    return inst;
}

double bernoulli_kl(double p, double q) {
    if (!(p > 0.0 && p < 1.0) || !(q > 0.0 && q < 1.0)) {
        throw DomainError("bernoulli_kl needs p, q in (0,1)");
    }
    return p * std::log(p / q) + (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
}

} // namespace cmab

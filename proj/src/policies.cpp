#include "cmab/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cmab/errors.hpp"

namespace cmab {

PolicyKind parse_policy(std::string_view name) {
    if (name == "bc-ucb") return PolicyKind::bc_ucb;
    if (name == "cucb") return PolicyKind::cucb;
    if (name == "uniform") return PolicyKind::uniform;
    if (name == "true-params") return PolicyKind::true_params;
    throw ConfigError("unknown policy '" + std::string(name) + "'");
}

std::string to_string(PolicyKind kind) {
    switch (kind) {
    case PolicyKind::bc_ucb: return "bc-ucb";
    case PolicyKind::cucb: return "cucb";
    case PolicyKind::uniform: return "uniform";
    case PolicyKind::true_params: return "true-params";
    }
    return "?";
}

double cucb_value(double mean, std::int64_t n, double log_t) {
    if (n < 1) throw DomainError("cucb_value needs n >= 1");
    return std::min(1.0, mean + std::sqrt(1.5 * log_t / static_cast<double>(n)));
}

IndexMatrix cucb_index(const CounterState& state, std::int64_t t) {
    if (t < 1) throw DomainError("round must be >= 1");
    const double log_t = std::log(static_cast<double>(t));
    IndexMatrix q(state.items(), state.arms());
    std::vector<double> column(state.items());
    for (std::size_t j = 0; j < state.arms(); ++j) {
        const int arm = static_cast<int>(j);
        if (!state.sampled(arm)) continue;
        for (std::size_t i = 0; i < state.items(); ++i) {
            column[i] = cucb_value(state.mean(i, arm), state.pulls(arm), log_t);
        }
        q.set_column(arm, column);
    }
    return q;
}

std::optional<ArmSet> init_action(const CounterState& state, const ActionSpace& space) {
    const int arms = static_cast<int>(state.arms());
    int first_unsampled = -1;
    for (int j = 0; j < arms; ++j) {
        if (!state.sampled(j)) {
            first_unsampled = j;
            break;
        }
    }
    if (first_unsampled < 0) return std::nullopt;

    if (space.is_budget()) {
        const auto size = static_cast<std::size_t>(std::min(space.max_size(), arms));
        ArmSet batch;
        for (int j = 0; j < arms && batch.size() < size; ++j) {
            if (!state.sampled(j)) batch.push_back(j);
        }
        for (int j = 0; j < arms && batch.size() < size; ++j) {
            if (state.sampled(j)) batch.push_back(j);
        }
        std::sort(batch.begin(), batch.end());
        return batch;
    }

    const ArmSet* best = nullptr;
    long best_fresh = -1;
    for (const auto& a : space.explicit_actions()) {
        if (!std::binary_search(a.begin(), a.end(), first_unsampled)) continue;
        const long fresh = std::count_if(a.begin(), a.end(), [&](int j) { return !state.sampled(j); });
        if (fresh > best_fresh) {
            best = &a;
            best_fresh = fresh;
        }
    }
    if (!best) {
        throw ConfigError("no action contains arm " + std::to_string(first_unsampled + 1) +
                          "; the action set cannot cover every arm");
    }
    return *best;
}

namespace {

// Unbiased draw from [0, n).
std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = Rng::max() - Rng::max() % n;
    std::uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % n;
}

} // namespace

Policy::Policy(PolicyKind kind, std::size_t items, std::size_t arms, std::uint64_t seed)
    : kind_(kind), counters_(items, arms), rng_(seed) {
    if (kind == PolicyKind::true_params) {
        throw ConfigError("use Policy::with_true_params for the diagnostic policy");
    }
}

Policy Policy::with_true_params(Matrix params) {
    Policy p(PolicyKind::bc_ucb, params.rows(), params.cols());
    p.kind_ = PolicyKind::true_params;
    p.true_params_ = std::move(params);
    return p;
}

IndexMatrix Policy::index() const {
    switch (kind_) {
    case PolicyKind::bc_ucb: return ucb_index(counters_, round_);
    case PolicyKind::cucb: return cucb_index(counters_, round_);
    case PolicyKind::true_params: {
        IndexMatrix q(true_params_.rows(), true_params_.cols());
        std::vector<double> column(true_params_.rows());
        for (std::size_t j = 0; j < true_params_.cols(); ++j) {
            for (std::size_t i = 0; i < true_params_.rows(); ++i) column[i] = true_params_(i, j);
            q.set_column(static_cast<int>(j), column);
        }
        return q;
    }
    case PolicyKind::uniform: break;
    }
    throw StateError("the uniform policy has no index");
}

ArmSet Policy::select_action(const RewardFamily& family, const ActionSpace& space,
                             const Oracle& oracle) {
    if (space.arms() != static_cast<int>(counters_.arms())) {
        throw ShapeError("action space and policy disagree on the number of arms");
    }
    if (kind_ == PolicyKind::uniform) {
        if (!space.is_budget()) {
            const auto& list = space.explicit_actions();
            return list[uniform_below(rng_, list.size())];
        }
        std::vector<int> arms(counters_.arms());
        std::iota(arms.begin(), arms.end(), 0);
        const auto size = static_cast<std::size_t>(std::min(space.max_size(), space.arms()));
        for (std::size_t k = 0; k < size; ++k) {
            const auto pick = k + uniform_below(rng_, arms.size() - k);
            std::swap(arms[k], arms[pick]);
        }
        ArmSet batch(arms.begin(), arms.begin() + static_cast<std::ptrdiff_t>(size));
        std::sort(batch.begin(), batch.end());
        return batch;
    }

    if (kind_ != PolicyKind::true_params) {
        if (auto init = init_action(counters_, space)) return *init;
    }
    const IndexMatrix q = index();
    const Matrix& values = q.values();
    return oracle([&](std::span<const int> arms) { return weighted_reward(family, values, arms); });
}

void Policy::observe(std::span<const int> action, const Matrix& feedback) {
    counters_.update(action, feedback);
    ++round_;
}

bool Policy::operator==(const Policy& other) const {
    return kind_ == other.kind_ && round_ == other.round_ && counters_ == other.counters_ &&
           rng_ == other.rng_ && true_params_ == other.true_params_;
}

} // namespace cmab

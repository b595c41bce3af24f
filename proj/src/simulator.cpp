#include "cmab/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numbers>
#include <thread>

#include "cmab/errors.hpp"

namespace cmab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stream tag for the uniform baseline's own generator.
constexpr std::uint64_t kPolicyStream = 0x706f6c696379ULL;

} // namespace

std::uint64_t episode_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ index);
}

Trajectory run_episode(const ProblemInstance& instance, const EpisodeSpec& spec, double r_max) {
    if (spec.horizon < 1) throw DomainError("horizon must be >= 1");
    const Oracle oracle(spec.oracle, instance.actions);
    Policy policy = spec.policy == PolicyKind::true_params
                        ? Policy::with_true_params(instance.params)
                        : Policy(spec.policy, instance.items(),
                                 static_cast<std::size_t>(instance.arms()),
                                 splitmix64(spec.seed ^ kPolicyStream));
    Rng env_rng(spec.seed);

    Trajectory traj;
    traj.rounds.reserve(static_cast<std::size_t>(spec.horizon));
    for (std::int64_t t = 1; t <= spec.horizon; ++t) {
        ArmSet action = policy.select_action(instance.family, instance.actions, oracle);
        const Matrix feedback = sample_feedback(instance, action, env_rng);
        const double reward = expected_reward(instance, action);
        policy.observe(action, feedback);
        traj.rounds.push_back({t, std::move(action), reward, spec.alpha * r_max - reward});
    }
    return traj;
}

Trajectory run_episode(const ProblemInstance& instance, const EpisodeSpec& spec) {
    return run_episode(instance, spec, best_action(instance).first);
}

RegretCurve approximation_regret(const Trajectory& trajectory, const ProblemInstance& instance,
                                 double alpha, double beta, std::optional<double> r_max) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0,1]");
    if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("beta must lie in (0,1]");
    const double best = r_max ? *r_max : best_action(instance).first;

    RegretCurve curve;
    curve.meta = {0, "", instance.name, alpha, beta};
    curve.cumulative.reserve(trajectory.rounds.size());
    double total = 0.0;
    for (const auto& round : trajectory.rounds) {
        total += alpha * beta * best - round.expected_reward;
        curve.cumulative.push_back(total);
    }
    return curve;
}

BoundMode parse_bound_mode(std::string_view name) {
    if (name == "thm1") return BoundMode::thm1;
    if (name == "cor1") return BoundMode::cor1;
    throw ConfigError("unknown bound mode '" + std::string(name) + "'");
}

std::string to_string(BoundMode mode) { return mode == BoundMode::thm1 ? "thm1" : "cor1"; }

int log_budget_factor(int budget) {
    if (budget < 1) throw DomainError("batch size must be >= 1");
    const int raw = static_cast<int>(std::ceil(std::log(static_cast<double>(budget)) / 1.61));
    return std::max(1, raw);
}

double regret_bound(const ProblemInstance& instance, const GapTable& gaps,
                    const SmoothnessParams& smoothness, std::int64_t horizon, BoundMode mode) {
    if (horizon < 2) throw DomainError("regret bound needs T >= 2");
    if (!gaps.delta_max_overall) throw DataError("gap table has no positive gap");
    if (gaps.delta_min.size() != static_cast<std::size_t>(instance.arms())) {
        throw DataError("gap table does not match the instance");
    }

    const double m_bar = instance.family.total_weight();
    const double arms = instance.arms();
    const double items = static_cast<double>(instance.items());
    const double d_max = *gaps.delta_max_overall;
    const double k = log_budget_factor(instance.budget());
    const double log_t = std::log(static_cast<double>(horizon));
    const double t = static_cast<double>(horizon);
    const double g_g = smoothness.gamma_g;
    const double g_inf = smoothness.gamma_inf;
    const double failure_term = arms * d_max * (1.0 + items * 2.0 * std::numbers::pi * std::numbers::pi / 3.0);

    if (mode == BoundMode::thm1) {
        double inv_gap_sum = 0.0;
        double log_ratio_sum = 0.0;
        for (std::size_t j = 0; j < gaps.delta_min.size(); ++j) {
            if (!gaps.delta_min[j]) continue;
            if (!gaps.delta_max[j]) throw DataError("arm has a minimal gap but no maximal gap");
            inv_gap_sum += 1.0 / *gaps.delta_min[j];
            log_ratio_sum += 1.0 + std::log(*gaps.delta_max[j] / *gaps.delta_min[j]);
        }
        return (8640.0 * g_g * g_g * m_bar * m_bar * inv_gap_sum +
                340.0 * g_inf * m_bar * log_ratio_sum) *
                   k * k * log_t +
               failure_term;
    }

    const double scale = 340.0 * g_inf * m_bar * arms * k * k * log_t;
    const double log_arg = std::max(std::numbers::e, d_max * t / scale);
    return 2.0 * std::sqrt(8640.0) * g_g * m_bar * k * std::sqrt(arms * t * log_t) + failure_term +
           scale * (2.0 + std::log(log_arg));
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

} // namespace

RegretSummary aggregate(std::span<const RegretCurve> curves) {
    if (curves.empty()) throw DataError("nothing to aggregate");
    const auto& ref = curves.front();
    for (const auto& c : curves) {
        if (c.meta.policy != ref.meta.policy || c.meta.instance != ref.meta.instance ||
            c.meta.alpha != ref.meta.alpha || c.meta.beta != ref.meta.beta ||
            c.cumulative.size() != ref.cumulative.size()) {
            throw DataError("curves with mixed metadata cannot be aggregated");
        }
    }
    const std::size_t len = ref.cumulative.size();
    const double n = static_cast<double>(curves.size());

    RegretSummary out;
    out.mean.assign(len, 0.0);
    out.stddev.assign(len, 0.0);
    for (const auto& c : curves) {
        for (std::size_t t = 0; t < len; ++t) out.mean[t] += c.cumulative[t];
    }
    for (double& m : out.mean) m /= n;
    for (const auto& c : curves) {
        for (std::size_t t = 0; t < len; ++t) {
            const double d = c.cumulative[t] - out.mean[t];
            out.stddev[t] += d * d;
        }
    }
    for (double& s : out.stddev) s = std::sqrt(s / n);

    if (len > 0) {
        std::vector<double> finals;
        for (const auto& c : curves) finals.push_back(c.cumulative.back());
        std::sort(finals.begin(), finals.end());
        for (double q : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
            out.final_quantiles[q] = quantile_sorted(finals, q);
        }
    }
    return out;
}

std::vector<RegretCurve> run_episodes(const ProblemInstance& instance, const EpisodeSpec& base,
                                      std::span<const std::uint64_t> seeds, double beta,
                                      unsigned workers) {
    const double r_max = best_action(instance).first;
    std::vector<RegretCurve> curves(seeds.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};

    auto work = [&] {
        for (std::size_t k = next++; k < seeds.size() && !failed; k = next++) {
            try {
                EpisodeSpec spec = base;
                spec.seed = seeds[k];
                const Trajectory traj = run_episode(instance, spec, r_max);
                curves[k] = approximation_regret(traj, instance, base.alpha, beta, r_max);
                curves[k].meta.seed = seeds[k];
                curves[k].meta.policy = to_string(base.policy);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };

    const unsigned count = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(seeds.size())));
    if (count == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < count; ++w) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return curves;
}

} // namespace cmab

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cmab/matrix.hpp"

namespace cmab {

// Raw moments of a sample of values in [0,1].
struct SampleMoments {
    std::int64_t count = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    double mean() const;
    // Plug-in (1/n) variance, clamped at zero against rounding.
    double variance() const;
};

// Per-(item, arm) sufficient statistics for semi-bandit feedback.
//
// Pull counts are per arm; every pull of arm j yields one observation for
// every item, so all items of an arm share the count. Sums are stored raw,
// which keeps updates exact and order independent.
class CounterState {
public:
    CounterState() = default;
    CounterState(std::size_t items, std::size_t arms);

    std::size_t items() const { return items_; }
    std::size_t arms() const { return pulls_.size(); }

    // Commits one round of feedback. `feedback` is items x |action|, column k
    // holding the observations for arm action[k]. Throws ShapeError on a
    // dimension mismatch and DomainError for values outside [0,1] or bad arm
    // ids; the state is unchanged when it throws.
    void update(std::span<const int> action, const Matrix& feedback);

    std::int64_t pulls(int arm) const { return pulls_.at(static_cast<std::size_t>(arm)); }
    bool sampled(int arm) const { return pulls(arm) > 0; }
    bool all_sampled() const;

    SampleMoments moments(std::size_t item, int arm) const;
    // Both throw StateError for an arm that was never pulled.
    double mean(std::size_t item, int arm) const;
    double variance(std::size_t item, int arm) const;

    bool operator==(const CounterState&) const = default;

private:
    std::size_t index(std::size_t item, int arm) const {
        return item * pulls_.size() + static_cast<std::size_t>(arm);
    }

    std::size_t items_ = 0;
    std::vector<std::int64_t> pulls_;
    std::vector<double> sum_x_;
    std::vector<double> sum_x_sq_;
};

// Empirical Bernstein radius sqrt(2 v x / n) + 3 x / n for n samples in [0,1]
// with empirical variance v at confidence level exp(-x).
// Requires n >= 1, v >= 0, x >= 0; throws DomainError otherwise.
double bernstein_radius(double v_hat, std::int64_t n, double x);

// Optimistic per-(item, arm) parameter estimates. Arms without samples have
// no entry; reading one throws StateError.
class IndexMatrix {
public:
    IndexMatrix() = default;
    IndexMatrix(std::size_t items, std::size_t arms);

    std::size_t items() const { return values_.rows(); }
    std::size_t arms() const { return values_.cols(); }

    bool has(int arm) const { return present_.at(static_cast<std::size_t>(arm)); }
    double at(std::size_t item, int arm) const;
    void set_column(int arm, std::span<const double> column);

    // Full items x arms matrix; throws StateError if any arm lacks an entry.
    const Matrix& values() const;

private:
    Matrix values_;
    std::vector<bool> present_;
};

// min{1, mean + bernstein_radius(variance, n, 3 log t)}.
double bc_ucb_value(double mean, double variance, std::int64_t n, double log_t);

// BC-UCB index min{1, p + sqrt(6 V log t / N) + 9 log t / N} for every sampled
// arm, natural log, t >= 1.
IndexMatrix ucb_index(const CounterState& state, std::int64_t t);

} // namespace cmab

#include "cmab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cmab/errors.hpp"

namespace cmab {

double SampleMoments::mean() const {
    if (count <= 0) throw StateError("mean of an empty sample");
    return sum / static_cast<double>(count);
}

double SampleMoments::variance() const {
    const double m = mean();
    return std::max(0.0, sum_sq / static_cast<double>(count) - m * m);
}

CounterState::CounterState(std::size_t items, std::size_t arms)
    : items_(items), pulls_(arms, 0), sum_x_(items * arms, 0.0), sum_x_sq_(items * arms, 0.0) {}

void CounterState::update(std::span<const int> action, const Matrix& feedback) {
    if (action.empty()) throw DomainError("empty action");
    if (feedback.rows() != items_ || feedback.cols() != action.size()) {
        throw ShapeError("feedback is " + std::to_string(feedback.rows()) + "x" +
                         std::to_string(feedback.cols()) + ", expected " + std::to_string(items_) +
                         "x" + std::to_string(action.size()));
    }
    for (int arm : action) {
        if (arm < 0 || static_cast<std::size_t>(arm) >= pulls_.size()) {
            throw DomainError("arm id out of range: " + std::to_string(arm));
        }
    }
    for (double x : feedback.data()) {
        if (!(x >= 0.0 && x <= 1.0)) throw DomainError("feedback outside [0,1]");
    }

    for (std::size_t k = 0; k < action.size(); ++k) {
        const int arm = action[k];
        ++pulls_[static_cast<std::size_t>(arm)];
        for (std::size_t i = 0; i < items_; ++i) {
            const double x = feedback(i, k);
            sum_x_[index(i, arm)] += x;
            sum_x_sq_[index(i, arm)] += x * x;
        }
    }
}

bool CounterState::all_sampled() const {
    return std::all_of(pulls_.begin(), pulls_.end(), [](std::int64_t n) { return n > 0; });
}

SampleMoments CounterState::moments(std::size_t item, int arm) const {
    return {pulls(arm), sum_x_.at(index(item, arm)), sum_x_sq_.at(index(item, arm))};
}

double CounterState::mean(std::size_t item, int arm) const {
    if (!sampled(arm)) throw StateError("arm " + std::to_string(arm) + " was never pulled");
    return moments(item, arm).mean();
}

double CounterState::variance(std::size_t item, int arm) const {
    if (!sampled(arm)) throw StateError("arm " + std::to_string(arm) + " was never pulled");
    return moments(item, arm).variance();
}

double bernstein_radius(double v_hat, std::int64_t n, double x) {
    if (n < 1) throw DomainError("bernstein_radius needs n >= 1");
    if (!(v_hat >= 0.0)) throw DomainError("bernstein_radius needs v_hat >= 0");
    if (!(x >= 0.0)) throw DomainError("bernstein_radius needs x >= 0");
    const double nd = static_cast<double>(n);
    return std::sqrt(2.0 * v_hat * x / nd) + 3.0 * x / nd;
}

IndexMatrix::IndexMatrix(std::size_t items, std::size_t arms)
    : values_(items, arms, 0.0), present_(arms, false) {}

double IndexMatrix::at(std::size_t item, int arm) const {
    if (!has(arm)) throw StateError("no index for unsampled arm " + std::to_string(arm));
    return values_(item, static_cast<std::size_t>(arm));
}

void IndexMatrix::set_column(int arm, std::span<const double> column) {
    if (column.size() != items()) throw ShapeError("index column has wrong length");
    for (std::size_t i = 0; i < column.size(); ++i) {
        values_(i, static_cast<std::size_t>(arm)) = column[i];
    }
    present_.at(static_cast<std::size_t>(arm)) = true;
}

const Matrix& IndexMatrix::values() const {
    for (std::size_t j = 0; j < present_.size(); ++j) {
        if (!present_[j]) throw StateError("index matrix has unsampled arm " + std::to_string(j));
    }
    return values_;
}

double bc_ucb_value(double mean, double variance, std::int64_t n, double log_t) {
    return std::min(1.0, mean + bernstein_radius(variance, n, 3.0 * log_t));
}

IndexMatrix ucb_index(const CounterState& state, std::int64_t t) {
    if (t < 1) throw DomainError("round must be >= 1");
    const double log_t = std::log(static_cast<double>(t));
    IndexMatrix q(state.items(), state.arms());
    std::vector<double> column(state.items());
    for (std::size_t j = 0; j < state.arms(); ++j) {
        const int arm = static_cast<int>(j);
        if (!state.sampled(arm)) continue;
        for (std::size_t i = 0; i < state.items(); ++i) {
            const SampleMoments m = state.moments(i, arm);
            column[i] = bc_ucb_value(m.mean(), m.variance(), m.count, log_t);
        }
        q.set_column(arm, column);
    }
    return q;
}

} // namespace cmab

#include "cmab/reward.hpp"

#include <cmath>
#include <numeric>

#include "cmab/errors.hpp"

namespace cmab {

FamilyKind parse_family(std::string_view name) {
    if (name == "pmc") return FamilyKind::pmc;
    if (name == "logistic") return FamilyKind::logistic;
    if (name == "linear") return FamilyKind::linear;
    throw DomainError("unknown reward family '" + std::string(name) + "'");
}

std::string to_string(FamilyKind kind) {
    switch (kind) {
    case FamilyKind::pmc: return "pmc";
    case FamilyKind::logistic: return "logistic";
    case FamilyKind::linear: return "linear";
    }
    return "?";
}

void RewardFamily::validate() const {
    if (weights.empty()) throw DomainError("reward family needs at least one item weight");
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("item weights must be >= 0");
    }
    if (!(total_weight() > 0.0)) throw DomainError("total item weight must be positive");
    if (kind == FamilyKind::logistic && !(c > 0.0)) {
        throw DomainError("logistic family needs C > 0");
    }
}

double RewardFamily::total_weight() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

namespace {

double logistic(double c, double s) { return 1.0 / (1.0 + c * std::exp(-s)); }

} // namespace

double item_value(FamilyKind kind, double c, std::span<const double> x) {
    switch (kind) {
    case FamilyKind::pmc: {
        double miss = 1.0;
        for (double v : x) miss *= 1.0 - v;
        return 1.0 - miss;
    }
    case FamilyKind::logistic:
        return logistic(c, std::accumulate(x.begin(), x.end(), 0.0));
    case FamilyKind::linear:
        return std::accumulate(x.begin(), x.end(), 0.0);
    }
    return 0.0;
}

void item_gradient(FamilyKind kind, double c, std::span<const double> x, std::span<double> grad) {
    if (grad.size() != x.size()) throw ShapeError("gradient buffer size mismatch");
    switch (kind) {
    case FamilyKind::pmc:
        // prod over the other arms; computed directly so x_k = 1 is safe.
        for (std::size_t k = 0; k < x.size(); ++k) {
            double prod = 1.0;
            for (std::size_t l = 0; l < x.size(); ++l) {
                if (l != k) prod *= 1.0 - x[l];
            }
            grad[k] = prod;
        }
        return;
    case FamilyKind::logistic: {
        const double r = logistic(c, std::accumulate(x.begin(), x.end(), 0.0));
        for (double& g : grad) g = r * (1.0 - r);
        return;
    }
    case FamilyKind::linear:
        for (double& g : grad) g = 1.0;
        return;
    }
}

double weighted_reward(const RewardFamily& family, const Matrix& params, std::span<const int> arms) {
    if (params.rows() != family.weights.size()) {
        throw ShapeError("parameter rows do not match item weights");
    }
    double x_buf[64];
    std::vector<double> x_heap;
    double* x = x_buf;
    if (arms.size() > 64) {
        x_heap.resize(arms.size());
        x = x_heap.data();
    }
    double total = 0.0;
    for (std::size_t i = 0; i < params.rows(); ++i) {
        const double w = family.weights[i];
        if (w == 0.0) continue;
        for (std::size_t k = 0; k < arms.size(); ++k) {
            x[k] = params(i, static_cast<std::size_t>(arms[k]));
        }
        total += w * item_value(family.kind, family.c, {x, arms.size()});
    }
    return total;
}

} // namespace cmab

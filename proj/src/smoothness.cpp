#include "cmab/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "cmab/errors.hpp"

namespace cmab {

SmoothnessParams closed_form_smoothness(const RewardFamily& family, int budget) {
    if (budget < 1) throw DomainError("batch size must be >= 1");
    switch (family.kind) {
    case FamilyKind::pmc:
        return {1.0, 1.0 / std::sqrt(std::numbers::e)};
    case FamilyKind::logistic:
        if (!(family.c > 0.0)) throw DomainError("logistic family needs C > 0");
        return {0.25, 0.25 * std::sqrt(1.0 + std::max(0.0, std::log(family.c)))};
    case FamilyKind::linear:
        return {1.0, std::sqrt(budget / 4.0)};
    }
    throw DomainError("unknown reward family");
}

namespace {

struct Maximizer {
    const RewardFamily& family;
    std::vector<double> grad;
    SmoothnessParams best{0.0, 0.0};

    void visit(const std::vector<double>& x) {
        item_gradient(family, x, grad);
        double gini = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            best.gamma_inf = std::max(best.gamma_inf, grad[k]);
            gini += x[k] * (1.0 - x[k]) * grad[k] * grad[k];
        }
        best.gamma_g = std::max(best.gamma_g, std::sqrt(gini));
    }
};

std::vector<double> interior_grid(double step) {
    if (!(step > 0.0) || !(step < 1.0)) throw DomainError("grid step must lie in (0,1)");
    const auto cells = static_cast<long>(std::llround(1.0 / step));
    std::vector<double> pts;
    for (long k = 1; k < cells; ++k) pts.push_back(static_cast<double>(k) * step);
    // Steps that do not divide 1 leave a last point short of 1.
    while (!pts.empty() && pts.back() >= 1.0) pts.pop_back();
    if (pts.empty()) throw DomainError("grid step leaves no interior points");
    return pts;
}

} // namespace

SmoothnessParams estimate_smoothness(const RewardFamily& family, int budget, const GridSpec& grid) {
    if (budget < 1) throw DomainError("batch size must be >= 1");
    const std::vector<double> pts = interior_grid(grid.step);
    const std::size_t n = pts.size();
    const auto k = static_cast<std::size_t>(budget);

    Maximizer max{family, std::vector<double>(k), {}};
    std::vector<double> x(k);

    if (budget <= grid.full_grid_max_budget) {
        if (std::pow(static_cast<double>(n), budget) > 2e8) {
            throw CapacityError("full smoothness grid too large");
        }
        std::vector<std::size_t> idx(k, 0);
        while (true) {
            for (std::size_t d = 0; d < k; ++d) x[d] = pts[idx[d]];
            max.visit(x);
            std::size_t d = 0;
            while (d < k && ++idx[d] == n) idx[d++] = 0;
            if (d == k) break;
        }
        return max.best;
    }

    for (std::size_t head = 1; head <= k; ++head) {
        for (double a : pts) {
            std::fill(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(head), a);
            if (head == k) {
                max.visit(x);
                continue;
            }
            for (double b : pts) {
                std::fill(x.begin() + static_cast<std::ptrdiff_t>(head), x.end(), b);
                max.visit(x);
            }
        }
    }
    return max.best;
}

SensitivityGap sensitivity_gap(const RewardFamily& family, std::span<const double> x,
                               std::span<const double> u, std::span<const double> v) {
    if (x.empty()) throw DomainError("sensitivity_gap needs a nonempty batch");
    if (u.size() != x.size() || v.size() != x.size()) {
        throw ShapeError("x, u and v must have the batch size");
    }
    double u_sq = 0.0;
    double v_sum = 0.0;
    std::vector<double> shifted(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!(u[k] >= 0.0) || !(v[k] >= 0.0)) throw DomainError("u and v must be >= 0");
        if (!(x[k] >= 0.0 && x[k] <= 1.0)) throw DomainError("x must lie in [0,1]");
        const double eps = std::min(u[k] * std::sqrt(x[k] * (1.0 - x[k])) + v[k], 1.0 - x[k]);
        shifted[k] = x[k] + eps;
        u_sq += u[k] * u[k];
        v_sum += v[k];
    }
    const SmoothnessParams s = closed_form_smoothness(family, static_cast<int>(x.size()));
    return {item_value(family, shifted) - item_value(family, x),
            3.0 * std::numbers::sqrt2 * s.gamma_g * std::sqrt(u_sq) + s.gamma_inf * v_sum};
}

} // namespace cmab

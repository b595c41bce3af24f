#pragma once

#include <span>
#include <utility>

#include "cmab/arm_set.hpp"
#include "cmab/reward.hpp"

namespace cmab {

// Gini-weighted smoothness pair: gamma_inf bounds every partial derivative,
// gamma_g bounds sqrt(sum_k x_k (1 - x_k) (df/dx_k)^2).
struct SmoothnessParams {
    double gamma_inf = 0.0;
    double gamma_g = 0.0;
};

// Published constants for batch size `budget`:
//   pmc      (1, 1/sqrt(e))
//   logistic (1/4, sqrt(1 + log C) / 4)
//   linear   (1, sqrt(K / 4))
// For logistic with C < 1 the log term is taken as zero; the formula itself is
// not a valid bound there, (1/4, 1/4) is.
SmoothnessParams closed_form_smoothness(const RewardFamily& family, int budget);

struct GridSpec {
    // Spacing of interior grid points step, 2 step, ... < 1.
    double step = 0.01;
    // Batch sizes up to this use the full tensor grid; larger ones use the
    // two-level exchangeable reduction.
    int full_grid_max_budget = 3;
};

// Grid maximization of the per-item smoothness functionals over (0,1)^K.
//
// Results are lower bounds on the true suprema. For K above
// full_grid_max_budget the search runs over points with n coordinates at a
// and K - n at b (all n, a, b on the grid), which contains the fully
// symmetric diagonal and the maximizers of every shipped family.
SmoothnessParams estimate_smoothness(const RewardFamily& family, int budget,
                                     const GridSpec& grid = {});

struct SensitivityGap {
    double lhs = 0.0;
    double rhs = 0.0;
};

// Both sides of the parameter-sensitivity inequality
//   f(x + eps) - f(x) <= 3 sqrt(2) gamma_g |u|_2 + gamma_inf |v|_1,
// eps_k = min{u_k sqrt(x_k (1 - x_k)) + v_k, 1 - x_k}, where f is the item
// reward over the batch and the constants are closed_form_smoothness(|x|).
SensitivityGap sensitivity_gap(const RewardFamily& family, std::span<const double> x,
                               std::span<const double> u, std::span<const double> v);

} // namespace cmab

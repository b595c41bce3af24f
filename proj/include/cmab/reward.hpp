#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cmab/matrix.hpp"

namespace cmab {

enum class FamilyKind { pmc, logistic, linear };

FamilyKind parse_family(std::string_view name);
std::string to_string(FamilyKind kind);

// Item-level reward shape shared by all items, plus the item weights.
//
//   pmc:      r_i = 1 - prod_j (1 - x_j)
//   logistic: r_i = 1 / (1 + C exp(-sum_j x_j))
//   linear:   r_i = sum_j x_j
//
// The total reward is sum_i w_i r_i.
struct RewardFamily {
    FamilyKind kind = FamilyKind::pmc;
    double c = 1.0;
    std::vector<double> weights;

    // Throws DomainError on negative weights, zero total weight or C <= 0.
    void validate() const;
    double total_weight() const;
};

// Item reward for the parameters of the arms in the batch.
double item_value(FamilyKind kind, double c, std::span<const double> x);

// Partial derivatives of item_value with respect to each x_k.
void item_gradient(FamilyKind kind, double c, std::span<const double> x, std::span<double> grad);

inline double item_value(const RewardFamily& family, std::span<const double> x) {
    return item_value(family.kind, family.c, x);
}
inline void item_gradient(const RewardFamily& family, std::span<const double> x,
                          std::span<double> grad) {
    item_gradient(family.kind, family.c, x, grad);
}

// Weighted reward sum_i w_i r_i(A; params_i) for an items x arms parameter matrix.
double weighted_reward(const RewardFamily& family, const Matrix& params, std::span<const int> arms);

} // namespace cmab

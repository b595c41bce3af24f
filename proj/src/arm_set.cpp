#include "cmab/arm_set.hpp"

#include <algorithm>
#include <limits>

#include "cmab/errors.hpp"
#include "cmab/matrix.hpp"

namespace cmab {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw ShapeError("matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                         std::to_string(rows_ * cols_));
    }
}

ArmSet make_arm_set(std::vector<int> ids, int arms) {
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
        throw DomainError("arm set has duplicate ids");
    }
    for (int id : ids) {
        if (id < 0 || id >= arms) {
            throw DomainError("arm id " + std::to_string(id + 1) + " outside [1, " +
                              std::to_string(arms) + "]");
        }
    }
    return ids;
}

std::string format_arm_set(const ArmSet& set) {
    std::string out = "{";
    for (std::size_t k = 0; k < set.size(); ++k) {
        if (k) out += ',';
        out += std::to_string(set[k] + 1);
    }
    return out + "}";
}

std::uint64_t count_subsets_up_to(int arms, int budget) {
    constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t total = 0;
    long double binom = 1.0L;
    for (int k = 1; k <= std::min(arms, budget); ++k) {
        binom = binom * static_cast<long double>(arms - k + 1) / static_cast<long double>(k);
        if (binom + static_cast<long double>(total) >= static_cast<long double>(cap)) return cap;
        total += static_cast<std::uint64_t>(binom + 0.5L);
    }
    return total;
}

std::vector<ArmSet> enumerate_subsets(int arms, int size) {
    std::vector<ArmSet> out;
    if (size < 0 || size > arms) return out;
    ArmSet current(static_cast<std::size_t>(size));
    for (int k = 0; k < size; ++k) current[static_cast<std::size_t>(k)] = k;
    while (true) {
        out.push_back(current);
        int pos = size - 1;
        while (pos >= 0 && current[static_cast<std::size_t>(pos)] == arms - size + pos) --pos;
        if (pos < 0) break;
        ++current[static_cast<std::size_t>(pos)];
        for (int k = pos + 1; k < size; ++k) {
            current[static_cast<std::size_t>(k)] = current[static_cast<std::size_t>(k - 1)] + 1;
        }
    }
    return out;
}

} // namespace cmab

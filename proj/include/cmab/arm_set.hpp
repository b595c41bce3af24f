#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cmab {

// A batch of base arms: 0-based arm ids, strictly increasing. Ordering of
// batches is lexicographic on the id sequence.
using ArmSet = std::vector<int>;

// Sorts, checks for duplicates and bounds (ids in [0, arms)). Throws DomainError.
ArmSet make_arm_set(std::vector<int> ids, int arms);

// "{1,3}" using 1-based ids, for logs and CSV-adjacent output.
std::string format_arm_set(const ArmSet& set);

// Number of nonempty subsets of [arms] with size at most `budget`, saturating at
// UINT64_MAX.
std::uint64_t count_subsets_up_to(int arms, int budget);

// Subsets of [arms] of exactly `size` elements in lexicographic order.
std::vector<ArmSet> enumerate_subsets(int arms, int size);

} // namespace cmab

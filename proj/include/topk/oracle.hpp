#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "topk/core.hpp"

namespace topk {

/// Reference answer: filter by s <= q <= e, sort by WeightKey descending,
/// keep the first min(k, count). O(n log n) per call; test fixture only.
std::vector<WeightedInterval> topk_bruteforce(std::span<const WeightedInterval> intervals, double q,
                                              std::size_t k);

}  // namespace topk

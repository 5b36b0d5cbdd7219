#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "topk/core.hpp"

namespace topk {

enum class Distribution { uniform, nested, clustered };

/// Throws std::invalid_argument for an unknown name.
Distribution parse_distribution(std::string_view name);
std::string_view to_string(Distribution d);

struct GenOptions {
  /// Squash weights onto a handful of values so ties are common.
  bool duplicate_weights = false;
};

// Deterministic for a fixed (distribution, n, seed, options):
//  uniform   - integer endpoints drawn i.i.d. from [0, 10n], weights in [0, 1)
//  nested    - [i, 2n-i] for i < n, weights a shuffled permutation of 1..n
//  clustered - endpoints from a small shared pool, weights from {1..5},
//              roughly one interval in ten an exact copy of an earlier one
std::vector<WeightedInterval> generate(Distribution dist, std::size_t n, std::uint64_t seed, GenOptions options = {});

}  // namespace topk

#include "topk/oracle.hpp"

#include <algorithm>

namespace topk {

std::vector<WeightedInterval> topk_bruteforce(std::span<const WeightedInterval> intervals, double q,
                                              std::size_t k) {
  std::vector<WeightedInterval> hits;
  for (const auto& iv : intervals) {
    if (iv.stabbed_by(q)) hits.push_back(iv);
  }
  std::sort(hits.begin(), hits.end(), [](const WeightedInterval& a, const WeightedInterval& b) {
    return WeightKey::of(a) > WeightKey::of(b);
  });
  if (hits.size() > k) hits.resize(k);
  return hits;
}

}  // namespace topk

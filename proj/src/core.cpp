#include "topk/core.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace topk {

RankMap::RankMap(std::span<const WeightedInterval> intervals) {
  endpoints_.reserve(2 * intervals.size());
  for (const auto& iv : intervals) {
    endpoints_.push_back(iv.s);
    endpoints_.push_back(iv.e);
  }
  std::sort(endpoints_.begin(), endpoints_.end());
  endpoints_.erase(std::unique(endpoints_.begin(), endpoints_.end()), endpoints_.end());
}

GridCoord RankMap::map_endpoint(double v) const {
  auto it = std::lower_bound(endpoints_.begin(), endpoints_.end(), v);
  assert(it != endpoints_.end() && *it == v && "value is not an endpoint");
  return 2 * static_cast<GridCoord>(it - endpoints_.begin());
}

GridCoord RankMap::map_query(double q) const {
  if (endpoints_.empty() || std::isnan(q) || q < endpoints_.front()) return kBeforeAll;
  if (q > endpoints_.back()) return kAfterAll;
  auto it = std::lower_bound(endpoints_.begin(), endpoints_.end(), q);
  auto rank = static_cast<GridCoord>(it - endpoints_.begin());
  return *it == q ? 2 * rank : 2 * rank - 1;
}

std::vector<HSegment> to_segments(std::span<const WeightedInterval> intervals, const RankMap& rm) {
  std::vector<HSegment> out;
  out.reserve(intervals.size());
  for (const auto& iv : intervals) {
    out.push_back({rm.map_endpoint(iv.s), rm.map_endpoint(iv.e), WeightKey::of(iv), iv.id});
  }
  return out;
}

void validate_intervals(std::span<const WeightedInterval> intervals) {
  if (intervals.size() > std::numeric_limits<IntervalId>::max()) {
    throw std::invalid_argument("too many intervals");
  }
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto& iv = intervals[i];
    if (iv.id != i) {
      throw std::invalid_argument("interval at position " + std::to_string(i) + " has id " +
                                  std::to_string(iv.id) + "; ids must be dense and ordered");
    }
    if (std::isnan(iv.s) || std::isnan(iv.e) || std::isnan(iv.w)) {
      throw std::invalid_argument("interval " + std::to_string(i) + " has a NaN field");
    }
    if (iv.s > iv.e) {
      throw std::invalid_argument("interval " + std::to_string(i) + " has s > e");
    }
  }
}

std::vector<IntervalId> order_by_key_descending(std::span<const WeightedInterval> intervals) {
  std::vector<IntervalId> order(intervals.size());
  std::iota(order.begin(), order.end(), IntervalId{0});
  std::sort(order.begin(), order.end(), [&](IntervalId a, IntervalId b) {
    return WeightKey::of(intervals[a]) > WeightKey::of(intervals[b]);
  });
  return order;
}

}  // namespace topk

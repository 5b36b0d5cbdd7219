#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace topk {

using IntervalId = std::uint32_t;

/// Closed interval [s, e] carrying a real weight. `id` is the dense index of
/// the interval inside its dataset.
struct WeightedInterval {
  IntervalId id = 0;
  double s = 0.0;
  double e = 0.0;
  double w = 0.0;

  bool stabbed_by(double q) const { return s <= q && q <= e; }

  friend bool operator==(const WeightedInterval&, const WeightedInterval&) = default;
};

/// Vertical order shared by every backend: larger weight is higher, equal
/// weights are broken by smaller id being higher. `a > b` means a ranks
/// above b. Weights must not be NaN.
struct WeightKey {
  double w = 0.0;
  IntervalId id = 0;

  static WeightKey of(const WeightedInterval& iv) { return {iv.w, iv.id}; }

  friend std::strong_ordering operator<=>(const WeightKey& a, const WeightKey& b) {
    if (a.w < b.w) return std::strong_ordering::less;
    if (a.w > b.w) return std::strong_ordering::greater;
    return b.id <=> a.id;
  }
  friend bool operator==(const WeightKey&, const WeightKey&) = default;
};

/// Grid coordinates after rank compression. Endpoint values land on even
/// coordinates, the open gaps between consecutive endpoints on odd ones.
using GridCoord = std::int64_t;

inline constexpr GridCoord kBeforeAll = std::numeric_limits<GridCoord>::min();
inline constexpr GridCoord kAfterAll = std::numeric_limits<GridCoord>::max();

inline constexpr bool is_sentinel(GridCoord x) { return x == kBeforeAll || x == kAfterAll; }

struct GridQuery {
  GridCoord x0 = kBeforeAll;
  std::size_t k = 1;
};

class RankMap {
 public:
  RankMap() = default;
  explicit RankMap(std::span<const WeightedInterval> intervals);

  std::span<const double> sorted_endpoints() const { return endpoints_; }
  GridCoord grid_width() const { return 2 * static_cast<GridCoord>(endpoints_.size()); }

  /// `v` must be one of the endpoints (asserted).
  GridCoord map_endpoint(double v) const;

  /// Exact endpoints map to 2*rank, values strictly between ranks r and r+1
  /// map to 2r+1, values outside the hull (and NaN) map to a sentinel.
  GridCoord map_query(double q) const;

 private:
  std::vector<double> endpoints_;
};

inline RankMap build_rank_map(std::span<const WeightedInterval> intervals) {
  return RankMap(intervals);
}

/// Image of an interval in the plane: x-extent on the grid, y given by its key.
struct HSegment {
  GridCoord x_lo = 0;
  GridCoord x_hi = 0;
  WeightKey ykey;
  IntervalId interval_id = 0;

  friend bool operator==(const HSegment&, const HSegment&) = default;
};

std::vector<HSegment> to_segments(std::span<const WeightedInterval> intervals, const RankMap& rm);

/// Throws std::invalid_argument unless every interval has finite-or-infinite
/// (non-NaN) fields, s <= e, and ids equal to their positions.
void validate_intervals(std::span<const WeightedInterval> intervals);

/// Interval positions sorted from highest to lowest WeightKey.
std::vector<IntervalId> order_by_key_descending(std::span<const WeightedInterval> intervals);

}  // namespace topk

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "topk/core.hpp"

namespace topk {

struct WalkStats {
  std::size_t cells_visited = 0;
  std::size_t locate_comparisons = 0;
  std::size_t table_reads = 0;
  std::size_t edges_scanned = 0;
};

struct HiveOptions {
  /// Also build the per-column table of top cells (O(1) locate).
  bool lookup_table = false;
};

// Combed rectangular subdivision of the plane induced by the intervals seen as
// horizontal segments [s, e] x w. x runs over grid columns; y is symbolic
// (vertical rank, 0 = highest WeightKey).
//
// Cells are half-open column ranges [x_lo, x_hi) bounded above by one segment
// (or the sky) and below by one segment (or the ground). The bottom side of a
// cell is split into edges, one per cell directly underneath. Combing
// propagates every second wall that hits a segment from below upward through
// that segment, which keeps the number of edges per cell at most two and adds
// at most as many cells as there are original upward walls.
class Hive {
 public:
  static constexpr std::int32_t kSky = -1;
  static constexpr std::int32_t kGround = -2;

  static constexpr std::size_t kDegreeCap = 4;
  static constexpr std::size_t kSizeCap = 12;
  static constexpr std::size_t kWalkCap = 6;

  using Options = HiveOptions;

  struct Edge {
    GridCoord lo = 0;  // [lo, hi)
    GridCoord hi = 0;
    std::int32_t seg = kGround;  // vertical rank or kGround
    std::uint32_t below = 0;     // cell across the edge; unused for kGround
  };

  struct Cell {
    GridCoord x_lo = kBeforeAll;  // outermost cells use the sentinels as open sides
    GridCoord x_hi = kAfterAll;
    std::int32_t top = kSky;
    std::int32_t bottom = kGround;
    std::uint32_t first_edge = 0;
    std::uint32_t edge_count = 0;
  };

  struct TopSlab {
    GridCoord lo = kBeforeAll;
    GridCoord hi = kAfterAll;
    std::uint32_t cell = 0;
  };

  struct Located {
    std::uint32_t cell = 0;
    WalkStats stats;
  };

  struct Result {
    std::vector<WeightedInterval> intervals;
    WalkStats stats;
  };

  struct BuildStats {
    std::size_t original_walls = 0;    // distinct upward endpoint walls hitting a segment
    std::size_t propagated_walls = 0;  // wall pieces added by combing
  };

  Hive() : Hive(std::vector<WeightedInterval>{}) {}
  /// Validates the input and audits the result; throws std::logic_error if a
  /// structural invariant or cap does not hold.
  explicit Hive(std::vector<WeightedInterval> intervals, Options options = {});

  const RankMap& rank_map() const { return rank_map_; }
  std::span<const WeightedInterval> intervals() const { return intervals_; }
  std::span<const HSegment> segments() const { return segments_; }
  std::span<const Cell> cells() const { return cells_; }
  std::span<const Edge> bottom_edges(std::uint32_t cell) const;
  std::span<const TopSlab> top_slabs() const { return top_slabs_; }
  bool has_lookup_table() const { return options_.lookup_table; }
  const BuildStats& build_stats() const { return build_stats_; }
  IntervalId id_at_rank(std::int32_t rank) const { return by_rank_[static_cast<std::size_t>(rank)]; }

  /// Binary search over the top slabs.
  Located locate_top(GridCoord x0) const;
  /// Single table read; throws std::logic_error if the table was not built.
  Located locate_top_table(GridCoord x0) const;

  Result walk_down(std::uint32_t start_cell, GridCoord x0, std::size_t k) const;

  Result query(double q, std::size_t k) const;
  Result query_grid(const GridQuery& gq) const;

  std::vector<std::string> audit() const;

  /// One line per cell:
  /// `cell <id> <x_lo> <x_hi> top=<id|SKY> bottom=(<lo>,<hi>,<id|GROUND>)...`
  /// with interval ids for segments and -inf/+inf for open sides.
  std::string dump() const;

 private:
  void build();

  Options options_;
  std::vector<WeightedInterval> intervals_;
  RankMap rank_map_;
  std::vector<HSegment> segments_;  // indexed by interval id
  std::vector<IntervalId> by_rank_;
  std::vector<Cell> cells_;
  std::vector<Edge> edges_;
  std::vector<TopSlab> top_slabs_;
  std::vector<std::uint32_t> lookup_;
  BuildStats build_stats_;
};

inline Hive build_hive(std::vector<WeightedInterval> intervals, Hive::Options options = {}) {
  return Hive(std::move(intervals), options);
}

inline Hive::Result query_hive(const Hive& hive, double q, std::size_t k) { return hive.query(q, k); }

}  // namespace topk

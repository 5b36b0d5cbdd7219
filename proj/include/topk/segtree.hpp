#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "topk/core.hpp"

namespace topk {

/// Per-query counters for the heap merge along the search path.
struct QueryStats {
  std::size_t heap_pushes = 0;
  std::size_t heap_pops = 0;
  std::size_t max_heap_size = 0;
  std::size_t path_length = 0;
};

/// ceil(log2(x)) for x >= 1; 0 for x <= 1.
int ceil_log2(std::uint64_t x);

/// Segment tree over the compressed grid. Every node keeps its canonical set
/// as a slice of one flat array, ordered by WeightKey descending. The slices
/// hold vertical ranks (position in the descending key order), so comparing
/// two entries is an integer compare.
class SegTree {
 public:
  struct Node {
    GridCoord lo = 0;  // slab [lo, hi)
    GridCoord hi = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t first = 0;  // slice of canonical_
    std::uint32_t count = 0;

    bool is_leaf() const { return left < 0; }
  };

  struct Result {
    std::vector<WeightedInterval> intervals;
    QueryStats stats;
  };

  SegTree() = default;
  /// Validates the input (see validate_intervals) and audits the result;
  /// throws std::logic_error if an invariant does not hold.
  explicit SegTree(std::vector<WeightedInterval> intervals);

  const RankMap& rank_map() const { return rank_map_; }
  std::span<const WeightedInterval> intervals() const { return intervals_; }
  std::span<const Node> nodes() const { return nodes_; }
  std::size_t stored_ids() const { return canonical_.size(); }
  int height() const { return height_; }

  /// Canonical set of a node as vertical ranks, highest key first.
  std::span<const std::uint32_t> canonical_ranks(std::size_t node) const;
  std::vector<IntervalId> canonical_ids(std::size_t node) const;
  IntervalId id_at_rank(std::uint32_t rank) const { return by_rank_[rank]; }

  /// Root-to-leaf node indices for grid coordinate x0; empty on sentinels or
  /// an empty tree.
  std::vector<std::size_t> search_path(GridCoord x0) const;

  Result query(double q, std::size_t k) const;
  Result query_grid(const GridQuery& gq) const;

  /// Human-readable invariant violations; empty when the tree is well formed.
  std::vector<std::string> audit() const;

 private:
  std::int32_t build_nodes(GridCoord lo, GridCoord hi);

  template <typename Fn>
  void for_each_canonical(std::size_t node, GridCoord a, GridCoord b, Fn&& fn) const;

  std::vector<WeightedInterval> intervals_;
  RankMap rank_map_;
  std::vector<IntervalId> by_rank_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> canonical_;
  int height_ = 0;
};

inline SegTree build_segtree(std::vector<WeightedInterval> intervals) {
  return SegTree(std::move(intervals));
}

inline SegTree::Result query_segtree(const SegTree& tree, double q, std::size_t k) {
  return tree.query(q, k);
}

}  // namespace topk

#include "topk/segtree.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace topk {

int ceil_log2(std::uint64_t x) {
  if (x <= 1) return 0;
  return static_cast<int>(std::bit_width(x - 1));
}

SegTree::SegTree(std::vector<WeightedInterval> intervals) : intervals_(std::move(intervals)) {
  validate_intervals(intervals_);
  rank_map_ = RankMap(intervals_);
  by_rank_ = order_by_key_descending(intervals_);

  const GridCoord width = rank_map_.grid_width();
  if (width == 0) return;
  nodes_.reserve(static_cast<std::size_t>(2 * width - 1));
  build_nodes(0, width);
  height_ = ceil_log2(static_cast<std::uint64_t>(width));

  // Inserting in descending key order leaves every slice sorted; two passes
  // (count, then fill) lay the slices out contiguously.
  std::vector<std::pair<GridCoord, GridCoord>> ranges(by_rank_.size());
  for (std::size_t r = 0; r < by_rank_.size(); ++r) {
    const auto& iv = intervals_[by_rank_[r]];
    ranges[r] = {rank_map_.map_endpoint(iv.s), rank_map_.map_endpoint(iv.e) + 1};
  }
  for (const auto& [a, b] : ranges) {
    for_each_canonical(0, a, b, [&](std::size_t v) { ++nodes_[v].count; });
  }
  std::uint32_t offset = 0;
  for (auto& node : nodes_) {
    node.first = offset;
    offset += node.count;
    node.count = 0;
  }
  canonical_.resize(offset);
  for (std::size_t r = 0; r < ranges.size(); ++r) {
    const auto [a, b] = ranges[r];
    for_each_canonical(0, a, b, [&](std::size_t v) {
      auto& node = nodes_[v];
      canonical_[node.first + node.count++] = static_cast<std::uint32_t>(r);
    });
  }

  if (auto problems = audit(); !problems.empty()) {
    throw std::logic_error("segment tree invariant violated: " + problems.front());
  }
}

std::int32_t SegTree::build_nodes(GridCoord lo, GridCoord hi) {
  const auto index = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({lo, hi});
  if (hi - lo > 1) {
    const GridCoord mid = lo + (hi - lo + 1) / 2;
    const auto left = build_nodes(lo, mid);
    const auto right = build_nodes(mid, hi);
    nodes_[index].left = left;
    nodes_[index].right = right;
  }
  return index;
}

// Visits the canonical decomposition of the half-open grid range [a, b).
template <typename Fn>
void SegTree::for_each_canonical(std::size_t node, GridCoord a, GridCoord b, Fn&& fn) const {
  const auto& v = nodes_[node];
  if (b <= v.lo || v.hi <= a) return;
  if (a <= v.lo && v.hi <= b) {
    fn(node);
    return;
  }
  for_each_canonical(static_cast<std::size_t>(v.left), a, b, fn);
  for_each_canonical(static_cast<std::size_t>(v.right), a, b, fn);
}

std::span<const std::uint32_t> SegTree::canonical_ranks(std::size_t node) const {
  const auto& v = nodes_.at(node);
  return std::span<const std::uint32_t>(canonical_).subspan(v.first, v.count);
}

std::vector<IntervalId> SegTree::canonical_ids(std::size_t node) const {
  std::vector<IntervalId> ids;
  for (auto r : canonical_ranks(node)) ids.push_back(by_rank_[r]);
  return ids;
}

std::vector<std::size_t> SegTree::search_path(GridCoord x0) const {
  std::vector<std::size_t> path;
  if (nodes_.empty() || is_sentinel(x0) || x0 < 0 || x0 >= rank_map_.grid_width()) return path;
  std::size_t v = 0;
  path.push_back(v);
  while (!nodes_[v].is_leaf()) {
    const auto& left = nodes_[static_cast<std::size_t>(nodes_[v].left)];
    v = static_cast<std::size_t>(x0 < left.hi ? nodes_[v].left : nodes_[v].right);
    path.push_back(v);
  }
  return path;
}

SegTree::Result SegTree::query(double q, std::size_t k) const {
  return query_grid({rank_map_.map_query(q), k});
}

namespace {

struct PathCursor {
  const std::uint32_t* pos;
  const std::uint32_t* end;
};

// std heap functions build a max-heap w.r.t. this "less" relation; the
// smallest rank is the highest WeightKey.
bool lower_priority(const PathCursor& a, const PathCursor& b) { return *a.pos > *b.pos; }

}  // namespace

SegTree::Result SegTree::query_grid(const GridQuery& gq) const {
  if (gq.k == 0) throw std::invalid_argument("k must be positive");
  Result result;
  auto& stats = result.stats;
  const auto path = search_path(gq.x0);
  stats.path_length = path.size();
  if (path.empty()) return result;

  std::vector<PathCursor> heap;
  heap.reserve(path.size());
  for (auto v : path) {
    auto slice = canonical_ranks(v);
    if (!slice.empty()) heap.push_back({slice.data(), slice.data() + slice.size()});
  }
  std::make_heap(heap.begin(), heap.end(), lower_priority);
  stats.heap_pushes = heap.size();
  stats.max_heap_size = heap.size();

  result.intervals.reserve(std::min(gq.k, intervals_.size()));
  while (!heap.empty()) {
    std::pop_heap(heap.begin(), heap.end(), lower_priority);
    ++stats.heap_pops;
    auto& top = heap.back();
    result.intervals.push_back(intervals_[by_rank_[*top.pos]]);
    if (result.intervals.size() == gq.k) break;
    if (++top.pos != top.end) {
      std::push_heap(heap.begin(), heap.end(), lower_priority);
      ++stats.heap_pushes;
    } else {
      heap.pop_back();
    }
    stats.max_heap_size = std::max(stats.max_heap_size, heap.size());
  }
  return result;
}

std::vector<std::string> SegTree::audit() const {
  std::vector<std::string> problems;
  const std::size_t n = intervals_.size();
  if (nodes_.empty()) {
    if (!canonical_.empty()) problems.push_back("canonical entries without nodes");
    return problems;
  }

  const auto bound = 2 * n * static_cast<std::size_t>(height_);
  if (rank_map_.grid_width() >= 2 && canonical_.size() > bound) {
    problems.push_back("stored ids " + std::to_string(canonical_.size()) + " exceed 2n*ceil(log2 W) = " +
                       std::to_string(bound));
  }

  // Walk the tree keeping the parent slab; check sortedness, the canonical
  // decomposition rule and the per-level multiplicity.
  struct Frame {
    std::size_t node;
    std::size_t level;
    GridCoord parent_lo;
    GridCoord parent_hi;
  };
  std::vector<std::vector<std::uint8_t>> per_level(static_cast<std::size_t>(height_) + 1,
                                                   std::vector<std::uint8_t>(n, 0));
  std::vector<Frame> stack{{0, 0, 0, 0}};
  while (!stack.empty()) {
    const auto f = stack.back();
    stack.pop_back();
    const auto& v = nodes_[f.node];
    if (f.level > static_cast<std::size_t>(height_)) {
      problems.push_back("node deeper than ceil(log2 W)");
      continue;
    }
    const auto slice = canonical_ranks(f.node);
    for (std::size_t i = 0; i < slice.size(); ++i) {
      const auto& iv = intervals_[by_rank_[slice[i]]];
      if (i > 0 && !(WeightKey::of(intervals_[by_rank_[slice[i - 1]]]) > WeightKey::of(iv))) {
        problems.push_back("canonical array of node " + std::to_string(f.node) + " not strictly descending");
      }
      const GridCoord a = rank_map_.map_endpoint(iv.s);
      const GridCoord b = rank_map_.map_endpoint(iv.e) + 1;
      const bool covers_node = a <= v.lo && v.hi <= b;
      const bool covers_parent = f.node != 0 && a <= f.parent_lo && f.parent_hi <= b;
      if (!covers_node || covers_parent) {
        problems.push_back("interval " + std::to_string(iv.id) + " misplaced at node " + std::to_string(f.node));
      }
      if (++per_level[f.level][iv.id] > 2) {
        problems.push_back("interval " + std::to_string(iv.id) + " stored more than twice on level " +
                           std::to_string(f.level));
      }
    }
    if (!v.is_leaf()) {
      stack.push_back({static_cast<std::size_t>(v.left), f.level + 1, v.lo, v.hi});
      stack.push_back({static_cast<std::size_t>(v.right), f.level + 1, v.lo, v.hi});
    }
  }
  return problems;
}

}  // namespace topk

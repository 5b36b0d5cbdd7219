#include "topk/hive.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace topk {

namespace {

// Answers "lowest segment strictly above rank r that crosses boundary b",
// i.e. the largest rank < r among segments covering columns b-1 and b.
// Boundary b separates column b-1 from column b. Bottom-up segment tree over
// boundaries with per-node rank lists in ascending order; only used while
// building.
class CrossingIndex {
 public:
  // `ranges[r]` is the half-open boundary range crossed by the segment of rank r.
  CrossingIndex(std::size_t boundaries, const std::vector<std::pair<GridCoord, GridCoord>>& ranges)
      : size_(boundaries), offsets_(2 * boundaries + 1, 0) {
    for (const auto& [a, b] : ranges) {
      decompose(a, b, [&](std::size_t v) { ++offsets_[v + 1]; });
    }
    for (std::size_t v = 1; v < offsets_.size(); ++v) offsets_[v] += offsets_[v - 1];
    entries_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t r = 0; r < ranges.size(); ++r) {
      decompose(ranges[r].first, ranges[r].second,
                [&](std::size_t v) { entries_[fill[v]++] = static_cast<std::int32_t>(r); });
    }
  }

  std::int32_t above(GridCoord boundary, std::int32_t rank) const {
    std::int32_t best = Hive::kSky;
    for (auto v = static_cast<std::size_t>(boundary) + size_; v >= 1; v >>= 1) {
      const auto* first = entries_.data() + offsets_[v];
      const auto* last = entries_.data() + offsets_[v + 1];
      const auto* it = std::lower_bound(first, last, rank);
      if (it != first) best = std::max(best, *(it - 1));
    }
    return best;
  }

 private:
  template <typename Fn>
  void decompose(GridCoord a, GridCoord b, Fn&& fn) const {
    auto l = static_cast<std::size_t>(a) + size_;
    auto r = static_cast<std::size_t>(b) + size_;
    for (; l < r; l >>= 1, r >>= 1) {
      if (l & 1) fn(l++);
      if (r & 1) fn(--r);
    }
  }

  std::size_t size_;
  std::vector<std::size_t> offsets_;
  std::vector<std::int32_t> entries_;
};

std::string coord_to_string(GridCoord x) {
  if (x == kBeforeAll) return "-inf";
  if (x == kAfterAll) return "+inf";
  return std::to_string(x);
}

}  // namespace

Hive::Hive(std::vector<WeightedInterval> intervals, Options options)
    : options_(options), intervals_(std::move(intervals)) {
  validate_intervals(intervals_);
  rank_map_ = RankMap(intervals_);
  segments_ = to_segments(intervals_, rank_map_);
  by_rank_ = order_by_key_descending(intervals_);
  build();
  if (auto problems = audit(); !problems.empty()) {
    throw std::logic_error("hive invariant violated: " + problems.front());
  }
}

void Hive::build() {
  const std::size_t n = intervals_.size();
  const GridCoord width = rank_map_.grid_width();
  const auto seg = [&](std::size_t rank) -> const HSegment& { return segments_[by_rank_[rank]]; };

  // Walls: every segment endpoint sends a wall upward to the first segment
  // crossing that boundary. Combing then goes bottom-up and pushes every
  // second wall arriving under a segment through it, to the next segment up.
  std::vector<std::pair<GridCoord, std::int32_t>> cuts;  // (boundary, rank of segment cut through)
  if (n > 0) {
    std::vector<std::pair<GridCoord, GridCoord>> crossing(n);
    for (std::size_t r = 0; r < n; ++r) crossing[r] = {seg(r).x_lo + 1, seg(r).x_hi + 1};
    const CrossingIndex index(static_cast<std::size_t>(width) + 1, crossing);

    std::vector<std::pair<std::int32_t, GridCoord>> original;
    for (std::size_t r = 0; r < n; ++r) {
      const auto rank = static_cast<std::int32_t>(r);
      for (GridCoord b : {seg(r).x_lo, seg(r).x_hi + 1}) {
        if (auto up = index.above(b, rank); up != kSky) original.emplace_back(up, b);
      }
    }
    std::sort(original.begin(), original.end());
    original.erase(std::unique(original.begin(), original.end()), original.end());
    build_stats_.original_walls = original.size();

    std::vector<std::vector<GridCoord>> arrivals(n);
    for (const auto& [rank, b] : original) arrivals[static_cast<std::size_t>(rank)].push_back(b);
    original = {};

    for (std::size_t r = n; r-- > 0;) {
      auto& walls = arrivals[r];
      std::sort(walls.begin(), walls.end());
      walls.erase(std::unique(walls.begin(), walls.end()), walls.end());
      const auto rank = static_cast<std::int32_t>(r);
      for (std::size_t i = 1; i < walls.size(); i += 2) {
        cuts.emplace_back(walls[i], rank);
        if (auto up = index.above(walls[i], rank); up != kSky) {
          arrivals[static_cast<std::size_t>(up)].push_back(walls[i]);
        }
      }
      walls = {};
    }
    build_stats_.propagated_walls = cuts.size();
  }

  // Sweep boundaries left to right. Each gap of the current column is keyed
  // by the element below it (a rank, or kGround) and owns one open cell.
  enum class Kind : std::uint8_t { end, start, cut };
  struct Event {
    GridCoord boundary;
    Kind kind;
    std::int32_t rank;
  };
  std::vector<Event> events;
  events.reserve(2 * n + cuts.size());
  for (std::size_t r = 0; r < n; ++r) {
    events.push_back({seg(r).x_lo, Kind::start, static_cast<std::int32_t>(r)});
    events.push_back({seg(r).x_hi + 1, Kind::end, static_cast<std::int32_t>(r)});
  }
  for (const auto& [b, rank] : cuts) events.push_back({b, Kind::cut, rank});
  cuts = {};
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.boundary < b.boundary; });

  std::set<std::int32_t> active;  // ascending rank = top to bottom
  const auto slot = [n](std::int32_t key) { return key == kGround ? n : static_cast<std::size_t>(key); };
  const auto below = [&](std::int32_t rank) {
    auto it = active.upper_bound(rank);
    return it == active.end() ? kGround : *it;
  };
  const auto top_of_gap = [&](std::int32_t key) {
    if (key == kGround) return active.empty() ? kSky : *active.rbegin();
    auto it = active.find(key);
    return it == active.begin() ? kSky : *std::prev(it);
  };

  std::vector<GridCoord> open_lo(n + 1, kBeforeAll);
  std::vector<std::size_t> stamp(n + 1, 0);
  std::vector<std::int32_t> closing;
  cells_.clear();

  std::size_t group = 0;
  for (std::size_t i = 0; i < events.size();) {
    const GridCoord b = events[i].boundary;
    std::size_t j = i;
    while (j < events.size() && events[j].boundary == b) ++j;
    ++group;
    closing.clear();
    const auto close = [&](std::int32_t key) {
      if (stamp[slot(key)] != group) {
        stamp[slot(key)] = group;
        closing.push_back(key);
      }
    };
    for (std::size_t e = i; e < j; ++e) {
      const auto& ev = events[e];
      switch (ev.kind) {
        case Kind::end:
          close(ev.rank);
          close(below(ev.rank));
          break;
        case Kind::start:
          close(below(ev.rank));
          break;
        case Kind::cut:
          close(ev.rank);
          break;
      }
    }
    for (auto key : closing) {
      cells_.push_back({open_lo[slot(key)], b, top_of_gap(key), key, 0, 0});
    }
    for (std::size_t e = i; e < j; ++e) {
      if (events[e].kind == Kind::end) active.erase(events[e].rank);
      if (events[e].kind == Kind::start) active.insert(events[e].rank);
    }
    for (auto key : closing) {
      if (key == kGround || active.contains(key)) open_lo[slot(key)] = b;
    }
    for (std::size_t e = i; e < j; ++e) {
      if (events[e].kind == Kind::start) open_lo[slot(events[e].rank)] = b;
    }
    i = j;
  }
  if (!active.empty()) throw std::logic_error("sweep finished with active segments");
  cells_.push_back({open_lo[slot(kGround)], kAfterAll, kSky, kGround, 0, 0});

  // Cells are emitted in increasing x_hi, so per-top lists come out sorted.
  std::vector<std::vector<std::uint32_t>> under(n);
  top_slabs_.clear();
  for (std::uint32_t c = 0; c < cells_.size(); ++c) {
    const auto& cell = cells_[c];
    if (cell.top == kSky) {
      top_slabs_.push_back({cell.x_lo, cell.x_hi, c});
    } else {
      under[static_cast<std::size_t>(cell.top)].push_back(c);
    }
  }

  edges_.clear();
  for (auto& cell : cells_) {
    cell.first_edge = static_cast<std::uint32_t>(edges_.size());
    if (cell.bottom == kGround) {
      edges_.push_back({cell.x_lo, cell.x_hi, kGround, 0});
    } else {
      const auto& list = under[static_cast<std::size_t>(cell.bottom)];
      auto it = std::upper_bound(list.begin(), list.end(), cell.x_lo,
                                 [&](GridCoord x, std::uint32_t c) { return x < cells_[c].x_hi; });
      for (; it != list.end() && cells_[*it].x_lo < cell.x_hi; ++it) {
        const auto& d = cells_[*it];
        edges_.push_back({std::max(cell.x_lo, d.x_lo), std::min(cell.x_hi, d.x_hi), cell.bottom, *it});
      }
    }
    cell.edge_count = static_cast<std::uint32_t>(edges_.size()) - cell.first_edge;
  }

  lookup_.clear();
  if (options_.lookup_table) {
    lookup_.resize(static_cast<std::size_t>(width));
    for (const auto& slab : top_slabs_) {
      const GridCoord lo = std::max<GridCoord>(slab.lo, 0);
      const GridCoord hi = std::min(slab.hi, width);
      for (GridCoord x = lo; x < hi; ++x) lookup_[static_cast<std::size_t>(x)] = slab.cell;
    }
  }
}

std::span<const Hive::Edge> Hive::bottom_edges(std::uint32_t cell) const {
  const auto& c = cells_.at(cell);
  return std::span<const Edge>(edges_).subspan(c.first_edge, c.edge_count);
}

Hive::Located Hive::locate_top(GridCoord x0) const {
  Located out;
  // First slab starts at kBeforeAll, so the predecessor always exists.
  auto it = std::upper_bound(top_slabs_.begin(), top_slabs_.end(), x0, [&](GridCoord x, const TopSlab& s) {
    ++out.stats.locate_comparisons;
    return x < s.lo;
  });
  out.cell = std::prev(it)->cell;
  return out;
}

Hive::Located Hive::locate_top_table(GridCoord x0) const {
  if (!options_.lookup_table) throw std::logic_error("hive was built without a lookup table");
  Located out;
  if (x0 < 0) {
    out.cell = top_slabs_.front().cell;
  } else if (x0 >= rank_map_.grid_width()) {
    out.cell = top_slabs_.back().cell;
  } else {
    out.cell = lookup_[static_cast<std::size_t>(x0)];
    out.stats.table_reads = 1;
  }
  return out;
}

Hive::Result Hive::walk_down(std::uint32_t start_cell, GridCoord x0, std::size_t k) const {
  if (k == 0) throw std::invalid_argument("k must be positive");
  const auto& start = cells_.at(start_cell);
  if (start.top != kSky) throw std::invalid_argument("walk must start in a top cell");
  Result result;
  result.stats.cells_visited = 1;
  if (is_sentinel(x0)) return result;
  if (x0 < start.x_lo || x0 >= start.x_hi) throw std::invalid_argument("x0 outside the start cell");

  std::uint32_t cur = start_cell;
  while (result.intervals.size() < k) {
    const Edge* crossed = nullptr;
    for (const auto& e : bottom_edges(cur)) {
      ++result.stats.edges_scanned;
      if (e.lo <= x0 && x0 < e.hi) {
        crossed = &e;
        break;
      }
    }
    if (crossed == nullptr || crossed->seg == kGround) break;
    result.intervals.push_back(intervals_[id_at_rank(crossed->seg)]);
    cur = crossed->below;
    ++result.stats.cells_visited;
  }
  return result;
}

Hive::Result Hive::query(double q, std::size_t k) const { return query_grid({rank_map_.map_query(q), k}); }

Hive::Result Hive::query_grid(const GridQuery& gq) const {
  if (gq.k == 0) throw std::invalid_argument("k must be positive");
  if (is_sentinel(gq.x0)) return {};
  const auto located = options_.lookup_table ? locate_top_table(gq.x0) : locate_top(gq.x0);
  auto result = walk_down(located.cell, gq.x0, gq.k);
  result.stats.locate_comparisons = located.stats.locate_comparisons;
  result.stats.table_reads = located.stats.table_reads;
  return result;
}

std::vector<std::string> Hive::audit() const {
  std::vector<std::string> problems;
  const std::size_t n = intervals_.size();
  const auto name = [](std::size_t c) { return "cell " + std::to_string(c); };

  if (cells_.size() > kSizeCap * n + 4) {
    problems.push_back(std::to_string(cells_.size()) + " cells exceed " + std::to_string(kSizeCap) + "n+4");
  }

  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto& cell = cells_[c];
    if (!(cell.x_lo < cell.x_hi)) problems.push_back(name(c) + " has an empty x-range");
    if (cell.edge_count == 0 || cell.edge_count > kDegreeCap) {
      problems.push_back(name(c) + " has " + std::to_string(cell.edge_count) + " bottom edges");
      continue;
    }
    for (auto side : {cell.top, cell.bottom}) {
      if (side < 0) continue;
      const auto& s = segments_[id_at_rank(side)];
      if (cell.x_lo < s.x_lo || cell.x_hi > s.x_hi + 1) {
        problems.push_back(name(c) + " extends past its bounding segment");
      }
    }
    if (cell.top >= 0 && cell.bottom >= 0 &&
        !(WeightKey::of(intervals_[id_at_rank(cell.top)]) > WeightKey::of(intervals_[id_at_rank(cell.bottom)]))) {
      problems.push_back(name(c) + " has its bottom segment above its top segment");
    }
    GridCoord x = cell.x_lo;
    for (const auto& e : bottom_edges(static_cast<std::uint32_t>(c))) {
      if (e.lo != x || !(e.lo < e.hi)) problems.push_back(name(c) + " bottom edges do not tile its x-range");
      x = e.hi;
      if (e.seg != cell.bottom) problems.push_back(name(c) + " bottom edge names another segment");
      if (e.seg == kGround) continue;
      if (e.below >= cells_.size()) {
        problems.push_back(name(c) + " links to a missing cell");
        continue;
      }
      const auto& d = cells_[e.below];
      if (d.top != e.seg || e.lo < d.x_lo || e.hi > d.x_hi) {
        problems.push_back(name(c) + " link is not consistent with the cell below");
      }
    }
    if (x != cell.x_hi) problems.push_back(name(c) + " bottom edges do not reach its right side");
  }

  if (top_slabs_.empty() || top_slabs_.front().lo != kBeforeAll || top_slabs_.back().hi != kAfterAll) {
    problems.push_back("top slabs do not span the line");
  }
  for (std::size_t i = 1; i < top_slabs_.size(); ++i) {
    if (top_slabs_[i].lo != top_slabs_[i - 1].hi) problems.push_back("top slabs are not contiguous");
  }

  if (options_.lookup_table) {
    if (lookup_.size() != static_cast<std::size_t>(rank_map_.grid_width())) {
      problems.push_back("lookup table has the wrong size");
    } else {
      for (GridCoord x = 0; x < rank_map_.grid_width(); ++x) {
        if (lookup_[static_cast<std::size_t>(x)] != locate_top(x).cell) {
          problems.push_back("lookup table disagrees with binary search at x=" + std::to_string(x));
          break;
        }
      }
    }
  }
  return problems;
}

std::string Hive::dump() const {
  std::string out;
  const auto seg_name = [&](std::int32_t s, const char* sentinel) {
    return s < 0 ? std::string(sentinel) : std::to_string(id_at_rank(s));
  };
  for (std::size_t c = 0; c < cells_.size(); ++c) {
    const auto& cell = cells_[c];
    out += "cell " + std::to_string(c) + ' ' + coord_to_string(cell.x_lo) + ' ' + coord_to_string(cell.x_hi) +
           " top=" + seg_name(cell.top, "SKY") + " bottom=";
    for (const auto& e : bottom_edges(static_cast<std::uint32_t>(c))) {
      out += '(' + coord_to_string(e.lo) + ',' + coord_to_string(e.hi) + ',' + seg_name(e.seg, "GROUND") + ')';
    }
    out += '\n';
  }
  return out;
}

}  // namespace topk

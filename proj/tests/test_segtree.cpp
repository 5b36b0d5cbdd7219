#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>

#include "test_support.hpp"
#include "topk/oracle.hpp"
#include "topk/segtree.hpp"

using namespace topk;
using topk::testing::ids_of;

namespace {

const std::vector<WeightedInterval> kThree{{0, 1, 5, 10}, {1, 2, 6, 20}, {2, 4, 9, 5}};

}  // namespace

TEST_CASE("ceil_log2") {
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(3) == 2);
  CHECK(ceil_log2(4) == 2);
  CHECK(ceil_log2(5) == 3);
  CHECK(ceil_log2(1024) == 10);
}

TEST_CASE("empty tree answers nothing") {
  SegTree tree(std::vector<WeightedInterval>{});
  CHECK(tree.rank_map().grid_width() == 0);
  CHECK(tree.nodes().empty());
  auto r = tree.query(0.0, 3);
  CHECK(r.intervals.empty());
  CHECK(r.stats.path_length == 0);
}

TEST_CASE("single interval is stored on the covering nodes only") {
  SegTree tree({{0, 1, 2, 1}});
  CHECK(tree.rank_map().grid_width() == 4);
  // Grid range [0, 2] in a 4-leaf tree: the node [0,2) and the leaf [2,3).
  CHECK(tree.stored_ids() == 2);
  CHECK(tree.stored_ids() <= 2 * 1 * static_cast<std::size_t>(ceil_log2(4)));
  for (std::size_t v = 0; v < tree.nodes().size(); ++v) {
    const auto& node = tree.nodes()[v];
    const bool covered = node.lo >= 0 && node.hi <= 3;
    if (!tree.canonical_ranks(v).empty()) CHECK(covered);
  }
  CHECK(tree.audit().empty());
}

TEST_CASE("three interval example matches the oracle") {
  SegTree tree(kThree);
  auto r = query_segtree(tree, 4, 2);
  CHECK(ids_of(r.intervals) == std::vector<IntervalId>{1, 0});
  CHECK(r.stats.heap_pops == 2);
  CHECK(ids_of(tree.query(4, 10).intervals) == std::vector<IntervalId>{1, 0, 2});
}

TEST_CASE("queries outside the hull take the sentinel path") {
  std::mt19937_64 rng(5);
  SegTree tree(testing::random_intervals(rng, 40));
  for (std::size_t k : {1u, 5u, 100u}) {
    CHECK(tree.query(-1.0, k).intervals.empty());
    CHECK(tree.query(1e9, k).intervals.empty());
    CHECK(tree.query(-1.0, k).stats.path_length == 0);
  }
}

TEST_CASE("canonical arrays are strictly descending after build") {
  std::mt19937_64 rng(64);
  for (int round = 0; round < 20; ++round) {
    SegTree tree(testing::random_intervals(rng, 64, 50, 8));
    for (std::size_t v = 0; v < tree.nodes().size(); ++v) {
      const auto ids = tree.canonical_ids(v);
      for (std::size_t i = 1; i < ids.size(); ++i) {
        REQUIRE(WeightKey::of(tree.intervals()[ids[i - 1]]) > WeightKey::of(tree.intervals()[ids[i]]));
      }
    }
    CHECK(tree.audit().empty());
  }
}

TEST_CASE("segtree equals the oracle on random instances") {
  std::mt19937_64 rng(200);
  for (int round = 0; round < 30; ++round) {
    auto ivs = testing::random_intervals(rng, 200, 120, round % 2 ? 10 : 100000);
    SegTree tree(ivs);
    std::uniform_real_distribution<double> qd(-5, 125);
    std::uniform_int_distribution<std::size_t> kd(1, 60);
    for (int i = 0; i < 50; ++i) {
      const double q = i % 2 ? std::round(qd(rng)) : qd(rng);
      const auto k = kd(rng);
      REQUIRE(tree.query(q, k).intervals == topk_bruteforce(ivs, q, k));
    }
  }
}

TEST_CASE("path canonical sets are exactly the stabbed set") {
  std::mt19937_64 rng(31337);
  for (int round = 0; round < 60; ++round) {
    auto ivs = testing::random_intervals(rng, 1 + round % 64, 30);
    SegTree tree(ivs);
    const auto& rm = tree.rank_map();
    for (GridCoord x = 0; x < rm.grid_width(); ++x) {
      std::multiset<IntervalId> on_path;
      for (auto v : tree.search_path(x)) {
        for (auto id : tree.canonical_ids(v)) on_path.insert(id);
      }
      std::multiset<IntervalId> stabbed;
      const double q = testing::real_for_grid(rm, x);
      for (const auto& iv : ivs) {
        if (iv.stabbed_by(q)) stabbed.insert(iv.id);
      }
      REQUIRE(on_path == stabbed);
    }
  }
}

TEST_CASE("query counters respect the heap bounds") {
  std::mt19937_64 rng(77);
  auto ivs = testing::random_intervals(rng, 500, 400);
  SegTree tree(ivs);
  const auto bound = 2 * static_cast<std::size_t>(ceil_log2(tree.rank_map().grid_width())) + 1;
  for (int i = 0; i < 400; ++i) {
    const double q = i;
    const std::size_t k = 1 + static_cast<std::size_t>(i % 40);
    const auto s = tree.query(q, k).stats;
    REQUIRE(s.max_heap_size <= s.path_length);
    REQUIRE(s.path_length <= bound);
    REQUIRE(s.heap_pops <= k);
    REQUIRE(s.heap_pushes <= s.heap_pops + s.path_length);
  }
  CHECK(tree.stored_ids() <= 2 * ivs.size() * static_cast<std::size_t>(tree.height()));
}

TEST_CASE("duplicate intervals are reported separately") {
  SegTree tree({{0, 1, 3, 5}, {1, 1, 3, 5}, {2, 1, 3, 5}});
  CHECK(ids_of(tree.query(2, 5).intervals) == std::vector<IntervalId>{0, 1, 2});
}

TEST_CASE("invalid arguments") {
  SegTree tree(kThree);
  CHECK_THROWS_AS(tree.query(4, 0), std::invalid_argument);
  CHECK_THROWS_AS(SegTree({{0, 2, 1, 1}}), std::invalid_argument);
}

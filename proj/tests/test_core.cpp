#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "test_support.hpp"
#include "topk/core.hpp"

using namespace topk;

namespace {

std::vector<double> endpoints(const RankMap& rm) {
  auto e = rm.sorted_endpoints();
  return {e.begin(), e.end()};
}

}  // namespace

TEST_CASE("build_rank_map deduplicates and sorts endpoints") {
  const std::vector<WeightedInterval> two{{0, 1, 5, 1}, {1, 2, 6, 1}};
  auto rm = build_rank_map(two);
  CHECK(endpoints(rm) == std::vector<double>{1, 2, 5, 6});
  CHECK(rm.grid_width() == 8);

  auto empty = build_rank_map({});
  CHECK(endpoints(empty).empty());
  CHECK(empty.grid_width() == 0);

  const std::vector<WeightedInterval> points{{0, 3, 3, 1}, {1, 3, 3, 2}};
  auto single = build_rank_map(points);
  CHECK(endpoints(single) == std::vector<double>{3});
  CHECK(single.grid_width() == 2);
}

TEST_CASE("map_endpoint doubles the rank") {
  const std::vector<WeightedInterval> two{{0, 1, 5, 1}, {1, 2, 6, 1}};
  auto rm = build_rank_map(two);
  CHECK(rm.map_endpoint(5) == 4);
  CHECK(rm.map_endpoint(1) == 0);
  CHECK(rm.map_endpoint(6) == 6);

  const std::vector<WeightedInterval> point{{0, 3, 3, 1}};
  CHECK(build_rank_map(point).map_endpoint(3) == 0);
}

TEST_CASE("map_query uses odd coordinates for gaps and sentinels outside") {
  const std::vector<WeightedInterval> two{{0, 1, 5, 1}, {1, 2, 6, 1}};
  auto rm = build_rank_map(two);
  CHECK(rm.map_query(3) == 3);
  CHECK(rm.map_query(5) == 4);
  CHECK(rm.map_query(0.5) == kBeforeAll);
  CHECK(rm.map_query(6.5) == kAfterAll);
  CHECK(rm.map_query(1.5) == 1);
  CHECK(rm.map_query(std::nan("")) == kBeforeAll);
  CHECK(build_rank_map({}).map_query(0) == kBeforeAll);
}

TEST_CASE("to_segments maps both endpoints and keeps the key") {
  const std::vector<WeightedInterval> two{{0, 1, 5, 10}, {1, 2, 6, 1}};
  auto segs = to_segments(two, build_rank_map(two));
  REQUIRE(segs.size() == 2);
  CHECK(segs[0] == HSegment{0, 4, WeightKey{10, 0}, 0});

  const std::vector<WeightedInterval> point{{0, 3, 3, 7}};
  CHECK(to_segments(point, build_rank_map(point))[0] == HSegment{0, 0, WeightKey{7, 0}, 0});

  const std::vector<WeightedInterval> tie{{0, 0, 1, 5}, {1, 0, 1, 5}};
  auto tied = to_segments(tie, build_rank_map(tie));
  CHECK(tied[0].ykey == WeightKey{5, 0});
  CHECK(tied[1].ykey == WeightKey{5, 1});
  CHECK(tied[0].ykey > tied[1].ykey);
}

TEST_CASE("grid stabbing is equivalent to real stabbing") {
  std::mt19937_64 rng(20240101);
  for (int round = 0; round < 200; ++round) {
    auto ivs = testing::random_intervals(rng, 1 + round % 30, 20);
    auto rm = build_rank_map(ivs);
    // Quarter steps cover endpoints, gaps and the outside on both sides.
    for (int t = -8; t <= 4 * 20 + 8; ++t) {
      const double q = t / 4.0;
      const auto x = rm.map_query(q);
      for (const auto& iv : ivs) {
        const bool grid = !is_sentinel(x) && rm.map_endpoint(iv.s) <= x && x <= rm.map_endpoint(iv.e);
        REQUIRE(grid == iv.stabbed_by(q));
      }
    }
  }
}

TEST_CASE("WeightKey is a strict total order") {
  std::mt19937_64 rng(7);
  auto ivs = testing::random_intervals(rng, 60, 10, 4);
  for (const auto& a : ivs) {
    const auto ka = WeightKey::of(a);
    CHECK_FALSE(ka > ka);
    for (const auto& b : ivs) {
      const auto kb = WeightKey::of(b);
      const int relations = int(ka > kb) + int(kb > ka) + int(ka == kb);
      REQUIRE(relations == 1);
      REQUIRE((ka == kb) == (a.id == b.id));
      for (const auto& c : ivs) {
        const auto kc = WeightKey::of(c);
        if (ka > kb && kb > kc) REQUIRE(ka > kc);
      }
    }
  }
  CHECK(WeightKey{2, 9} > WeightKey{1, 0});
  CHECK(WeightKey{1, 0} > WeightKey{1, 1});
}

TEST_CASE("to_segments preserves cardinality and is injective on ids") {
  std::mt19937_64 rng(99);
  auto ivs = testing::random_intervals(rng, 300);
  auto segs = to_segments(ivs, build_rank_map(ivs));
  CHECK(segs.size() == ivs.size());
  std::set<IntervalId> seen;
  for (const auto& s : segs) {
    CHECK(s.x_lo <= s.x_hi);
    CHECK(s.x_lo % 2 == 0);
    CHECK(s.x_hi % 2 == 0);
    seen.insert(s.interval_id);
  }
  CHECK(seen.size() == ivs.size());
}

TEST_CASE("validate_intervals rejects malformed input") {
  const std::vector<WeightedInterval> reversed{{0, 5, 1, 1}};
  CHECK_THROWS_AS(validate_intervals(reversed), std::invalid_argument);
  const std::vector<WeightedInterval> bad_id{{1, 0, 1, 1}};
  CHECK_THROWS_AS(validate_intervals(bad_id), std::invalid_argument);
  const std::vector<WeightedInterval> nan_weight{{0, 0, 1, std::nan("")}};
  CHECK_THROWS_AS(validate_intervals(nan_weight), std::invalid_argument);
  const std::vector<WeightedInterval> fine{{0, 2, 2, 1}, {1, -INFINITY, INFINITY, 0}};
  CHECK_NOTHROW(validate_intervals(fine));
}

#include <doctest.h>

#include <sstream>
#include <stdexcept>

#include "topk/generate.hpp"
#include "topk/segtree.hpp"
#include "topk/verify.hpp"

using namespace topk;

namespace {

std::vector<Backend> all_backends(std::span<const WeightedInterval> ivs) {
  std::vector<Backend> out;
  for (const auto& name : backend_names()) out.push_back(make_backend(name, ivs));
  return out;
}

}  // namespace

TEST_CASE("all backends pass verification") {
  for (auto dist : {Distribution::uniform, Distribution::nested, Distribution::clustered}) {
    const auto ivs = generate(dist, 150, 2);
    const auto backends = all_backends(ivs);
    const auto report = verify(ivs, backends, make_query_mix(ivs, 400, 9));
    CHECK(report.passed());
    CHECK(report.queries_run == 400);
  }
}

TEST_CASE("all-equal weights verify with id tie order") {
  std::vector<WeightedInterval> ivs;
  for (IntervalId i = 0; i < 80; ++i) ivs.push_back({i, double(i % 13), double(i % 13 + i % 7), 1.0});
  const auto backends = all_backends(ivs);
  CHECK(verify(ivs, backends, make_query_mix(ivs, 300, 4)).passed());
}

TEST_CASE("a corrupted backend is caught with a shrunk counterexample") {
  const auto ivs = generate(Distribution::nested, 20, 3);
  auto good = make_backend("segtree", ivs);
  // Drops the third result whenever there is one.
  Backend broken{"broken", [good](double q, std::size_t k) {
                   auto ans = good.query(q, k);
                   if (ans.intervals.size() >= 3) ans.intervals.erase(ans.intervals.begin() + 2);
                   return ans;
                 }};
  const std::vector<Backend> backends{good, broken};
  const std::vector<QuerySpec> queries{{100.0, 5}, {10.0, 15}};
  const auto report = verify(ivs, backends, queries);
  REQUIRE_FALSE(report.passed());
  const auto& cx = *report.failure;
  CHECK(cx.backend == "broken");
  CHECK(cx.q == 10.0);
  CHECK(cx.k == 3);
  CHECK(cx.expected.size() == 3);
  CHECK(cx.actual.size() == 2);
  CHECK(describe(cx).find("q=10 k=3") != std::string::npos);
}

TEST_CASE("bound violations and exceptions count as failures") {
  const auto ivs = generate(Distribution::uniform, 10, 3);
  Backend noisy{"noisy", [](double, std::size_t) {
                  BackendAnswer a;
                  a.violations.push_back("walk too long");
                  return a;
                }};
  Backend throwing{"throwing", [](double, std::size_t) -> BackendAnswer { throw std::runtime_error("boom"); }};
  const std::vector<QuerySpec> queries{{-100.0, 2}};
  CHECK_FALSE(verify(ivs, std::vector<Backend>{noisy}, queries).passed());
  const auto report = verify(ivs, std::vector<Backend>{throwing}, queries);
  REQUIRE_FALSE(report.passed());
  CHECK(report.failure->k == 1);
  CHECK(describe(*report.failure).find("boom") != std::string::npos);
}

TEST_CASE("query mix covers endpoints, gaps and the outside") {
  const std::vector<WeightedInterval> ivs{{0, 1, 5, 1}, {1, 2, 6, 2}};
  const auto mix = make_query_mix(ivs, 200, 1);
  bool endpoint = false, outside = false, gap = false, big_k = false;
  for (const auto& q : mix) {
    endpoint |= q.q == 1 || q.q == 2 || q.q == 5 || q.q == 6;
    outside |= q.q < 1 || q.q > 6;
    gap |= q.q == 1.5 || q.q == 3.5 || q.q == 5.5;
    big_k |= q.k == 7;
    CHECK(q.k >= 1);
  }
  CHECK(endpoint);
  CHECK(outside);
  CHECK(gap);
  CHECK(big_k);
  CHECK(mix.size() == 200);
}

TEST_CASE("bench counters stay within the structural bounds") {
  const auto ivs = generate(Distribution::uniform, 2000, 8);
  const std::vector<std::size_t> ks{1, 10, 100};

  const auto hive_rows = bench(ivs, make_backend("hive", ivs), ks, 500, 1);
  REQUIRE(hive_rows.size() == 3);
  CHECK(hive_rows[0].k == 1);
  CHECK(hive_rows[0].max_cells_visited <= 6 * 2);
  CHECK(hive_rows[0].mean_locate_comparisons > 0);
  for (const auto& r : hive_rows) CHECK(r.max_cells_visited <= 6 * (r.k + 1));

  SegTree tree(ivs);
  const auto heap_bound = 2 * static_cast<std::size_t>(ceil_log2(tree.rank_map().grid_width())) + 1;
  for (const auto& r : bench(ivs, make_backend("segtree", ivs), ks, 500, 1)) {
    CHECK(r.max_heap_size <= heap_bound);
    CHECK(r.queries == 500);
  }
}

TEST_CASE("bench on an empty dataset reports zero-query rows") {
  const std::vector<WeightedInterval> none;
  const std::vector<std::size_t> ks{1, 5};
  const auto rows = bench(none, make_backend("hive-table", none), ks, 100, 1);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].queries == 0);
  CHECK(rows[1].n == 0);

  std::ostringstream csv;
  write_bench_csv(csv, rows);
  const auto text = csv.str();
  CHECK(text.rfind("backend,n,k,queries,", 0) == 0);
  CHECK(text.find("hive-table,0,5,0,") != std::string::npos);
}

TEST_CASE("unknown backend name") {
  CHECK_THROWS_AS(make_backend("kd-tree", {}), std::invalid_argument);
}

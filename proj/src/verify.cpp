#include "topk/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "topk/hive.hpp"
#include "topk/oracle.hpp"
#include "topk/segtree.hpp"

namespace topk {

namespace {

Backend segtree_backend(std::span<const WeightedInterval> intervals) {
  auto tree = std::make_shared<const SegTree>(std::vector<WeightedInterval>(intervals.begin(), intervals.end()));
  const auto width = static_cast<std::uint64_t>(tree->rank_map().grid_width());
  const std::size_t heap_bound = 2 * static_cast<std::size_t>(ceil_log2(width)) + 1;
  return {"segtree", [tree, heap_bound](double q, std::size_t k) {
            auto r = tree->query(q, k);
            const auto& s = r.stats;
            BackendAnswer ans{std::move(r.intervals), {}, {}};
            ans.counters.heap_ops = s.heap_pushes + s.heap_pops;
            ans.counters.max_heap_size = s.max_heap_size;
            if (s.max_heap_size > heap_bound) {
              ans.violations.push_back("max_heap_size " + std::to_string(s.max_heap_size) + " > " +
                                       std::to_string(heap_bound));
            }
            if (s.max_heap_size > s.path_length) ans.violations.push_back("max_heap_size exceeds path length");
            if (s.heap_pops > k) ans.violations.push_back("heap_pops exceeds k");
            if (s.heap_pushes > s.heap_pops + s.path_length) {
              ans.violations.push_back("heap_pushes exceeds heap_pops + path_length");
            }
            return ans;
          }};
}

Backend hive_backend(std::span<const WeightedInterval> intervals, bool table) {
  auto hive = std::make_shared<const Hive>(std::vector<WeightedInterval>(intervals.begin(), intervals.end()),
                                           Hive::Options{table});
  const std::size_t locate_bound = static_cast<std::size_t>(ceil_log2(hive->top_slabs().size())) + 1;
  return {table ? "hive-table" : "hive", [hive, table, locate_bound](double q, std::size_t k) {
            auto r = hive->query(q, k);
            const auto& s = r.stats;
            BackendAnswer ans{std::move(r.intervals), {}, {}};
            ans.counters.cells_visited = s.cells_visited;
            ans.counters.locate_comparisons = s.locate_comparisons;
            if (s.cells_visited > Hive::kWalkCap * (k + 1)) {
              ans.violations.push_back("cells_visited " + std::to_string(s.cells_visited) + " > 6(k+1)");
            }
            const auto x0 = hive->rank_map().map_query(q);
            if (table && !is_sentinel(x0) && s.table_reads != 1) {
              ans.violations.push_back("table locate used " + std::to_string(s.table_reads) + " reads");
            }
            if (!table && s.locate_comparisons > locate_bound) {
              ans.violations.push_back("locate used " + std::to_string(s.locate_comparisons) + " comparisons");
            }
            return ans;
          }};
}

BackendAnswer run_guarded(const Backend& b, double q, std::size_t k) {
  try {
    return b.query(q, k);
  } catch (const std::exception& e) {
    BackendAnswer ans;
    ans.violations.push_back(std::string("exception: ") + e.what());
    return ans;
  }
}

bool fails(const BackendAnswer& ans, const std::vector<WeightedInterval>& expected) {
  return !ans.violations.empty() || ans.intervals != expected;
}

std::string ids(const std::vector<WeightedInterval>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + std::to_string(v[i].id);
  return out + "]";
}

}  // namespace

Backend make_backend(const std::string& name, std::span<const WeightedInterval> intervals) {
  if (name == "segtree") return segtree_backend(intervals);
  if (name == "hive") return hive_backend(intervals, false);
  if (name == "hive-table") return hive_backend(intervals, true);
  throw std::invalid_argument("unknown backend '" + name + "'");
}

std::vector<QuerySpec> make_query_mix(std::span<const WeightedInterval> intervals, std::size_t count,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const RankMap rm(intervals);
  const auto ends = rm.sorted_endpoints();
  const std::size_t n = intervals.size();
  const std::size_t k_choices[] = {1, 3, 17, n + 5};
  std::uniform_int_distribution<std::size_t> k_pick(0, 4);
  std::uniform_int_distribution<std::size_t> k_any(1, n + 5);

  std::vector<QuerySpec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    double q = 0.0;
    if (ends.empty()) {
      q = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    } else {
      std::uniform_int_distribution<std::size_t> idx(0, ends.size() - 1);
      switch (i % 5) {
        case 0:
          q = ends[idx(rng)];
          break;
        case 1:
          if (ends.size() > 1) {
            const auto j = std::uniform_int_distribution<std::size_t>(0, ends.size() - 2)(rng);
            q = ends[j] + (ends[j + 1] - ends[j]) / 2;
          } else {
            q = ends[0];
          }
          break;
        case 2:
          q = (i / 5) % 2 == 0 ? ends.front() - 1.0 : ends.back() + 1.0;
          break;
        default:
          q = std::uniform_real_distribution<double>(ends.front(), ends.back())(rng);
          break;
      }
    }
    const auto pick = k_pick(rng);
    const std::size_t k = pick < 4 ? k_choices[pick] : k_any(rng);
    out.push_back({q, k});
  }
  return out;
}

VerifyReport verify(std::span<const WeightedInterval> intervals, std::span<const Backend> backends,
                    std::span<const QuerySpec> queries) {
  VerifyReport report;
  for (const auto& qs : queries) {
    ++report.queries_run;
    const auto expected = topk_bruteforce(intervals, qs.q, qs.k);
    for (const auto& b : backends) {
      if (!fails(run_guarded(b, qs.q, qs.k), expected)) continue;
      for (std::size_t k = 1; k <= qs.k; ++k) {
        auto want = topk_bruteforce(intervals, qs.q, k);
        auto got = run_guarded(b, qs.q, k);
        if (fails(got, want)) {
          report.failure = Counterexample{b.name, qs.q, k, std::move(want), std::move(got.intervals),
                                          std::move(got.violations)};
          return report;
        }
      }
    }
  }
  return report;
}

std::string describe(const Counterexample& cx) {
  std::ostringstream os;
  os << "backend " << cx.backend << " fails at q=" << format_number(cx.q) << " k=" << cx.k << ": expected "
     << ids(cx.expected) << ", got " << ids(cx.actual);
  for (const auto& v : cx.violations) os << "; " << v;
  return os.str();
}

std::vector<BenchRow> bench(std::span<const WeightedInterval> intervals, const Backend& backend,
                            std::span<const std::size_t> ks, std::size_t queries, std::uint64_t seed) {
  std::vector<BenchRow> rows;
  const auto points = intervals.empty() ? std::vector<QuerySpec>{} : make_query_mix(intervals, queries, seed);
  for (auto k : ks) {
    BenchRow row{backend.name, intervals.size(), k, points.size()};
    double cells = 0, heap_ops = 0, locate = 0;
    const auto t0 = std::chrono::steady_clock::now();
    for (const auto& p : points) {
      const auto ans = backend.query(p.q, k);
      const auto& c = ans.counters;
      cells += static_cast<double>(c.cells_visited);
      heap_ops += static_cast<double>(c.heap_ops);
      locate += static_cast<double>(c.locate_comparisons);
      row.max_cells_visited = std::max(row.max_cells_visited, c.cells_visited);
      row.max_heap_ops = std::max(row.max_heap_ops, c.heap_ops);
      row.max_heap_size = std::max(row.max_heap_size, c.max_heap_size);
    }
    const auto elapsed = std::chrono::duration<double, std::nano>(std::chrono::steady_clock::now() - t0).count();
    if (!points.empty()) {
      const auto m = static_cast<double>(points.size());
      row.mean_cells_visited = cells / m;
      row.mean_heap_ops = heap_ops / m;
      row.mean_locate_comparisons = locate / m;
      row.ns_per_query = elapsed / m;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows) {
  out << "backend,n,k,queries,mean_cells_visited,max_cells_visited,mean_heap_ops,max_heap_ops,max_heap_size,"
         "mean_locate_comparisons,ns_per_query\n";
  for (const auto& r : rows) {
    out << r.backend << ',' << r.n << ',' << r.k << ',' << r.queries << ',' << format_number(r.mean_cells_visited)
        << ',' << r.max_cells_visited << ',' << format_number(r.mean_heap_ops) << ',' << r.max_heap_ops << ','
        << r.max_heap_size << ',' << format_number(r.mean_locate_comparisons) << ',' << format_number(std::round(r.ns_per_query))
        << '\n';
  }
}

}  // namespace topk

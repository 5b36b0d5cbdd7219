#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "topk/core.hpp"
#include "topk/dataset_io.hpp"

namespace topk {

/// Backend-neutral counters for one query. Fields a backend does not track stay 0.
struct QueryCounters {
  std::size_t cells_visited = 0;
  std::size_t locate_comparisons = 0;
  std::size_t heap_ops = 0;  // pushes + pops
  std::size_t max_heap_size = 0;
};

struct BackendAnswer {
  std::vector<WeightedInterval> intervals;
  QueryCounters counters;
  /// Per-query bound checks that failed (heap size, walk length, ...).
  std::vector<std::string> violations;
};

struct Backend {
  std::string name;
  std::function<BackendAnswer(double q, std::size_t k)> query;
};

inline const std::vector<std::string>& backend_names() {
  static const std::vector<std::string> names{"segtree", "hive", "hive-table"};
  return names;
}

/// Builds "segtree", "hive" or "hive-table" over a copy of `intervals`.
/// Throws std::invalid_argument for an unknown name and std::logic_error if
/// the built structure fails its audit.
Backend make_backend(const std::string& name, std::span<const WeightedInterval> intervals);

/// Seeded query mix: exact endpoints, midpoints between neighbouring
/// endpoints, points outside the hull and uniform points inside it, with k
/// cycling through 1, 3, 17, n+5 and random values in [1, n+5].
std::vector<QuerySpec> make_query_mix(std::span<const WeightedInterval> intervals, std::size_t count,
                                      std::uint64_t seed);

struct Counterexample {
  std::string backend;
  double q = 0.0;
  std::size_t k = 0;
  std::vector<WeightedInterval> expected;
  std::vector<WeightedInterval> actual;
  std::vector<std::string> violations;
};

struct VerifyReport {
  std::size_t queries_run = 0;
  std::optional<Counterexample> failure;

  bool passed() const { return !failure.has_value(); }
};

/// Runs every query through every backend and the brute-force oracle. Stops
/// at the first mismatch or bound violation and shrinks k to the smallest
/// value that still reproduces it.
VerifyReport verify(std::span<const WeightedInterval> intervals, std::span<const Backend> backends,
                    std::span<const QuerySpec> queries);

std::string describe(const Counterexample& cx);

struct BenchRow {
  std::string backend;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t queries = 0;
  double mean_cells_visited = 0.0;
  std::size_t max_cells_visited = 0;
  double mean_heap_ops = 0.0;
  std::size_t max_heap_ops = 0;
  std::size_t max_heap_size = 0;
  double mean_locate_comparisons = 0.0;
  double ns_per_query = 0.0;
};

/// One row per k. Query points come from make_query_mix; wall time is
/// informative only.
std::vector<BenchRow> bench(std::span<const WeightedInterval> intervals, const Backend& backend,
                            std::span<const std::size_t> ks, std::size_t queries, std::uint64_t seed);

void write_bench_csv(std::ostream& out, std::span<const BenchRow> rows);

}  // namespace topk

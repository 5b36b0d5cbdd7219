// topk: dataset generation, oracle verification, counter benchmarks and
// subdivision dumps for the top-k interval stabbing backends.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "topk/dataset_io.hpp"
#include "topk/generate.hpp"
#include "topk/hive.hpp"
#include "topk/verify.hpp"

namespace {

// Returns stdout when path is empty.
std::ostream& output_stream(const std::string& path, std::unique_ptr<std::ofstream>& holder) {
  if (path.empty()) return std::cout;
  holder = std::make_unique<std::ofstream>(path);
  if (!*holder) throw std::runtime_error("cannot write " + path);
  return *holder;
}

std::string join_ids(const std::vector<topk::WeightedInterval>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + std::to_string(v[i].id);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Top-k weighted interval stabbing: generate, verify, bench"};
  app.require_subcommand(1);

  std::string dist = "uniform";
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  std::size_t queries = 1000;
  std::vector<std::string> backends;
  std::vector<std::size_t> ks;
  std::string input;
  std::string output;
  std::string query_file;
  bool duplicate_weights = false;

  auto* gen = app.add_subcommand("gen", "Write a generated dataset");
  gen->add_option("--dist", dist, "uniform | nested | clustered")->capture_default_str();
  gen->add_option("--n", n, "Number of intervals")->capture_default_str();
  gen->add_option("--seed", seed)->capture_default_str();
  gen->add_flag("--duplicate-weights", duplicate_weights, "Draw weights from four values");
  gen->add_option("--output", output, "Output file (default stdout)");

  auto* ver = app.add_subcommand("verify", "Compare backends against the brute-force oracle");
  ver->add_option("--input", input)->required();
  ver->add_option("--backend", backends, "segtree | hive | hive-table (repeatable, default all)");
  ver->add_option("--queries", queries)->capture_default_str();
  ver->add_option("--seed", seed)->capture_default_str();

  auto* ben = app.add_subcommand("bench", "Operation counters and timings as CSV");
  ben->add_option("--input", input)->required();
  ben->add_option("--backend", backends, "segtree | hive | hive-table (repeatable, default all)");
  ben->add_option("--k", ks, "Result size (repeatable, default 1 10 100)");
  ben->add_option("--queries", queries)->capture_default_str();
  ben->add_option("--seed", seed)->capture_default_str();
  ben->add_option("--output", output, "Output file (default stdout)");

  auto* dump = app.add_subcommand("dump-hive", "Print the combed subdivision, one cell per line");
  dump->add_option("--input", input)->required();
  dump->add_option("--output", output, "Output file (default stdout)");

  auto* qry = app.add_subcommand("query", "Answer the queries of a 'q k' file");
  qry->add_option("--input", input)->required();
  qry->add_option("--queries-file", query_file)->required();
  qry->add_option("--backend", backends, "segtree | hive | hive-table (default hive)");
  qry->add_option("--output", output, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    std::unique_ptr<std::ofstream> file;
    if (*gen) {
      auto data = topk::generate(topk::parse_distribution(dist), n, seed, {duplicate_weights});
      topk::write_dataset(output_stream(output, file), data);
      return 0;
    }

    const auto data = topk::read_dataset_file(input);
    if (backends.empty()) backends = *qry ? std::vector<std::string>{"hive"} : topk::backend_names();

    if (*ver) {
      std::vector<topk::Backend> built;
      for (const auto& name : backends) built.push_back(topk::make_backend(name, data));
      const auto mix = topk::make_query_mix(data, queries, seed);
      const auto report = topk::verify(data, built, mix);
      if (!report.passed()) {
        std::cerr << "FAIL: " << topk::describe(*report.failure) << '\n';
        return 1;
      }
      std::cerr << "PASS: " << report.queries_run << " queries, " << built.size() << " backend(s), n=" << data.size()
                << '\n';
      return 0;
    }

    if (*ben) {
      if (ks.empty()) ks = {1, 10, 100};
      std::vector<topk::BenchRow> rows;
      for (const auto& name : backends) {
        const auto backend = topk::make_backend(name, data);
        auto part = topk::bench(data, backend, ks, queries, seed);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      topk::write_bench_csv(output_stream(output, file), rows);
      return 0;
    }

    if (*dump) {
      output_stream(output, file) << topk::Hive(data).dump();
      return 0;
    }

    if (*qry) {
      const auto backend = topk::make_backend(backends.front(), data);
      auto& out = output_stream(output, file);
      for (const auto& q : topk::read_query_file(query_file)) {
        out << topk::format_number(q.q) << ' ' << q.k << ": " << join_ids(backend.query(q.q, q.k).intervals) << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

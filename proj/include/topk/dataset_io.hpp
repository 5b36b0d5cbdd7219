#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "topk/core.hpp"

namespace topk {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  /// 1-based line number in the input.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct QuerySpec {
  double q = 0.0;
  std::size_t k = 1;
};

// Dataset: one `s e w` per line. Query file: one `q k` per line. Blank lines
// and lines starting with '#' are skipped; interval ids count data lines only.
std::vector<WeightedInterval> parse_dataset(std::istream& in);
std::vector<WeightedInterval> read_dataset_file(const std::filesystem::path& path);
std::vector<QuerySpec> parse_queries(std::istream& in);
std::vector<QuerySpec> read_query_file(const std::filesystem::path& path);

void write_dataset(std::ostream& out, std::span<const WeightedInterval> intervals);

/// Shortest decimal form that parses back to the same double.
std::string format_number(double v);

}  // namespace topk

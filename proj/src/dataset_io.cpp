#include "topk/dataset_io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

namespace topk {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

bool skippable(std::string_view line) {
  auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string_view::npos || line[pos] == '#';
}

double parse_real(std::string_view field, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(line_no, "not a number: '" + std::string(field) + "'");
  }
  if (std::isnan(v)) throw ParseError(line_no, "NaN is not allowed");
  return v;
}

template <typename Fn>
void for_each_data_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    fn(split_fields(line), line_no);
  }
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

}  // namespace

std::vector<WeightedInterval> parse_dataset(std::istream& in) {
  std::vector<WeightedInterval> out;
  for_each_data_line(in, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
    if (f.size() != 3) throw ParseError(line_no, "expected 's e w', got " + std::to_string(f.size()) + " fields");
    WeightedInterval iv{static_cast<IntervalId>(out.size()), parse_real(f[0], line_no), parse_real(f[1], line_no),
                        parse_real(f[2], line_no)};
    if (iv.s > iv.e) throw ParseError(line_no, "left endpoint exceeds right endpoint");
    out.push_back(iv);
  });
  return out;
}

std::vector<WeightedInterval> read_dataset_file(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_dataset(in);
}

std::vector<QuerySpec> parse_queries(std::istream& in) {
  std::vector<QuerySpec> out;
  for_each_data_line(in, [&](const std::vector<std::string_view>& f, std::size_t line_no) {
    if (f.size() != 2) throw ParseError(line_no, "expected 'q k', got " + std::to_string(f.size()) + " fields");
    std::size_t k = 0;
    auto [ptr, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), k);
    if (ec != std::errc{} || ptr != f[1].data() + f[1].size() || k == 0) {
      throw ParseError(line_no, "k must be a positive integer, got '" + std::string(f[1]) + "'");
    }
    out.push_back({parse_real(f[0], line_no), k});
  });
  return out;
}

std::vector<QuerySpec> read_query_file(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_queries(in);
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_dataset(std::ostream& out, std::span<const WeightedInterval> intervals) {
  for (const auto& iv : intervals) {
    out << format_number(iv.s) << ' ' << format_number(iv.e) << ' ' << format_number(iv.w) << '\n';
  }
}

}  // namespace topk

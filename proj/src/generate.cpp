#include "topk/generate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace topk {

Distribution parse_distribution(std::string_view name) {
  if (name == "uniform") return Distribution::uniform;
  if (name == "nested") return Distribution::nested;
  if (name == "clustered") return Distribution::clustered;
  throw std::invalid_argument("unknown distribution '" + std::string(name) + "'");
}

std::string_view to_string(Distribution d) {
  switch (d) {
    case Distribution::uniform:
      return "uniform";
    case Distribution::nested:
      return "nested";
    case Distribution::clustered:
      return "clustered";
  }
  return "?";
}

namespace {

double micro_round(double u) { return std::floor(u * 1e6) / 1e6; }

}  // namespace

std::vector<WeightedInterval> generate(Distribution dist, std::size_t n, std::uint64_t seed, GenOptions options) {
  std::mt19937_64 rng(seed);
  std::vector<WeightedInterval> out;
  out.reserve(n);
  const auto span = static_cast<std::int64_t>(10 * std::max<std::size_t>(n, 1));

  switch (dist) {
    case Distribution::uniform: {
      std::uniform_int_distribution<std::int64_t> coord(0, span);
      std::uniform_real_distribution<double> weight(0.0, 1.0);
      for (std::size_t i = 0; i < n; ++i) {
        auto a = coord(rng);
        auto b = coord(rng);
        if (a > b) std::swap(a, b);
        out.push_back({static_cast<IntervalId>(i), static_cast<double>(a), static_cast<double>(b), micro_round(weight(rng))});
      }
      break;
    }
    case Distribution::nested: {
      std::vector<std::size_t> weights(n);
      std::iota(weights.begin(), weights.end(), std::size_t{1});
      std::shuffle(weights.begin(), weights.end(), rng);
      for (std::size_t i = 0; i < n; ++i) {
        out.push_back({static_cast<IntervalId>(i), static_cast<double>(i), static_cast<double>(2 * n - i),
                       static_cast<double>(weights[i])});
      }
      break;
    }
    case Distribution::clustered: {
      const auto pool_size = static_cast<std::size_t>(std::sqrt(static_cast<double>(n))) + 2;
      std::uniform_int_distribution<std::int64_t> coord(0, span);
      std::vector<double> pool(pool_size);
      for (auto& p : pool) p = static_cast<double>(coord(rng));
      std::uniform_int_distribution<std::size_t> pick(0, pool_size - 1);
      std::uniform_int_distribution<int> weight(1, 5);
      std::uniform_int_distribution<int> percent(0, 99);
      for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && percent(rng) < 10) {
          std::uniform_int_distribution<std::size_t> earlier(0, i - 1);
          auto copy = out[earlier(rng)];
          copy.id = static_cast<IntervalId>(i);
          out.push_back(copy);
          continue;
        }
        auto a = pool[pick(rng)];
        auto b = pool[pick(rng)];
        if (a > b) std::swap(a, b);
        out.push_back({static_cast<IntervalId>(i), a, b, static_cast<double>(weight(rng))});
      }
      break;
    }
  }

  if (options.duplicate_weights) {
    std::uniform_int_distribution<int> level(0, 3);
    for (auto& iv : out) iv.w = static_cast<double>(level(rng));
  }
  return out;
}

}  // namespace topk

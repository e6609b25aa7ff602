#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string_view>

namespace sbstlab {

/// Deterministic random source. Wraps std::mt19937_64 (output sequence fixed
/// by the standard) and does bounded sampling in-house so results never depend
/// on the standard library's unspecified distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, n). Requires n > 0.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  /// Uniform in [lo, hi], inclusive.
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    const auto width =
        static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
    if (width == UINT64_MAX) return static_cast<std::int64_t>(next());
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) +
                                     below(width + 1));
  }

  /// Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

 private:
  std::mt19937_64 engine_;
};

/// Fitness-proportionate (roulette-wheel) choice: index i is drawn with
/// probability w_i / sum(w). An all-zero weight vector degenerates to a
/// uniform choice. Weights must be non-negative.
inline std::size_t roulette_select(std::span<const double> weights, Rng& rng) {
  if (weights.empty())
    throw std::invalid_argument("roulette_select on empty weights");
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) return static_cast<std::size_t>(rng.below(weights.size()));
  const double r = rng.unit() * total;
  double cum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cum += weights[i];
    if (r < cum) return i;
  }
  return weights.size() - 1;  // r landed on the accumulated rounding edge
}

/// Stable seed for a named sub-stream: FNV-1a over master + tag, then a
/// splitmix64 finalizer. Used so every run in an experiment has a recorded,
/// reproducible seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
  std::uint64_t h = 14695981039346656037ULL;
  auto mix_byte = [&h](unsigned char b) {
    h ^= b;
    h *= 1099511628211ULL;
  };
  for (int i = 0; i < 8; ++i) mix_byte((master >> (8 * i)) & 0xff);
  for (unsigned char c : tag) mix_byte(c);
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

}  // namespace sbstlab

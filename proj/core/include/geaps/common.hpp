#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace geaps {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class EmptyBuffer : public Error {
 public:
  using Error::Error;
};

class EpisodeExhausted : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2 a, Vec2 b) = default;

  double norm() const { return std::hypot(x, y); }
};

/// A point in goal space. Goals are positions: integer-valued for the grid
/// mazes, real-valued for the point maze.
using Goal = Vec2;

struct Cell {
  int x = 0;
  int y = 0;
  friend constexpr bool operator==(Cell, Cell) = default;
  friend constexpr auto operator<=>(Cell, Cell) = default;
};

inline int floor_to_int(double v) {
  const int i = static_cast<int>(v);
  return v < static_cast<double>(i) ? i - 1 : i;
}

inline Cell cell_of(Vec2 p) { return {floor_to_int(p.x), floor_to_int(p.y)}; }

inline Vec2 to_vec(Cell c) { return {static_cast<double>(c.x), static_cast<double>(c.y)}; }

struct CellHash {
  std::size_t operator()(Cell c) const noexcept {
    return std::hash<std::int64_t>{}((static_cast<std::int64_t>(c.x) << 32) ^
                                     static_cast<std::uint32_t>(c.y));
  }
};

struct Vec2Hash {
  std::size_t operator()(Vec2 v) const noexcept {
    // +0.0 so that -0.0 and 0.0 hash alike.
    const auto bx = std::bit_cast<std::uint64_t>(v.x + 0.0);
    const auto by = std::bit_cast<std::uint64_t>(v.y + 0.0);
    std::uint64_t h = bx * 0x9e3779b97f4a7c15ULL ^ (by + 0x632be59bd9b4e019ULL);
    h ^= h >> 29;
    h *= 0xbf58476d1ce4e5b9ULL;
    return static_cast<std::size_t>(h ^ (h >> 32));
  }
};

// ---------------------------------------------------------------------------
// Random stream
// ---------------------------------------------------------------------------

/// Seeded random stream over std::mt19937_64. The distributions are built on
/// the raw engine output (whose sequence the standard fixes), so draws are
/// identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t next_u64();
  /// Uniform integer in [0, n). Requires n > 0.
  std::size_t uniform_index(std::size_t n);
  /// Uniform real in [0, 1).
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  bool bernoulli(double p) { return uniform01() < p; }
  /// Index drawn proportionally to non-negative weights. Throws if the
  /// weights are empty or sum to zero.
  std::size_t categorical(std::span<const double> weights);

  /// Independent child stream derived from this stream's seed and a tag.
  Rng split(std::uint64_t tag) const;

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t& x);

// ---------------------------------------------------------------------------
// Small numeric helpers
// ---------------------------------------------------------------------------

/// log(sum(exp(v))) computed stably.
double log_sum_exp(std::span<const double> v);

}  // namespace geaps

#pragma once

// Seeded generators and brute-force oracles shared by the test binaries.
// The oracles deliberately avoid the library's own algorithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <random>
#include <vector>

#include "fracsep/interval_set.hpp"
#include "fracsep/rational.hpp"

namespace fracsep::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  bool coin() { return gen_() & 1u; }

 private:
  std::mt19937_64 gen_;
};

/// Up to `max_pieces` closed intervals (possibly points) with endpoints on
/// the grid k/grid inside [0, 1].
inline IntervalSet<Rational> random_grid_set(Rng& rng, int max_pieces = 5, std::int64_t grid = 1000) {
  std::vector<Interval<Rational>> pieces;
  const auto n = rng.between(1, max_pieces);
  for (std::int64_t i = 0; i < n; ++i) {
    std::int64_t a = rng.between(0, grid);
    std::int64_t len = rng.coin() ? 0 : rng.between(0, grid / 4);
    std::int64_t b = std::min(grid, a + len);
    pieces.push_back({Rational(a, grid), Rational(b, grid)});
  }
  return IntervalSet<Rational>(std::move(pieces));
}

/// Distance from x to a finite union of closed intervals, by scanning all pieces.
inline Rational scan_distance(const Rational& x, const IntervalSet<Rational>& s) {
  Rational best(std::numeric_limits<std::int64_t>::max());
  for (const auto& iv : s) {
    Rational d = x < iv.lo ? iv.lo - x : (iv.hi < x ? x - iv.hi : Rational(0));
    if (d < best) best = d;
  }
  return best;
}

/// Hausdorff distance of grid sets inside [0,1] (endpoints multiples of 1/grid) by checking
/// every point of the doubled grid inside each set. The farthest point of A
/// from B is an endpoint of A or a gap midpoint of B, both on that grid.
inline Rational grid_hausdorff(const IntervalSet<Rational>& a, const IntervalSet<Rational>& b, std::int64_t grid) {
  auto directed = [&](const IntervalSet<Rational>& p, const IntervalSet<Rational>& q) {
    Rational worst(0);
    for (std::int64_t k = 0; k <= 2 * grid; ++k) {
      Rational x(k, 2 * grid);
      bool inside = false;
      for (const auto& iv : p) inside = inside || (iv.lo <= x && x <= iv.hi);
      if (!inside) continue;
      Rational d = scan_distance(x, q);
      if (worst < d) worst = d;
    }
    return worst;
  };
  Rational x = directed(a, b);
  Rational y = directed(b, a);
  return x < y ? y : x;
}

/// Minimal number of closed eps-balls with centres on grid points of X that
/// cover X. Shortest path over candidate centres: consecutive balls (sorted
/// by centre) must leave no point of X uncovered between them.
inline std::size_t brute_force_cover(const IntervalSet<Rational>& x, const Rational& eps, std::int64_t grid) {
  std::vector<Rational> centers;
  for (std::int64_t k = 0; k <= grid; ++k) {
    Rational c(k, grid);
    for (const auto& iv : x) {
      if (iv.lo <= c && c <= iv.hi) {
        centers.push_back(c);
        break;
      }
    }
  }
  // X meets the open interval (lo, hi)?
  auto meets_open = [&](const Rational& lo, const Rational& hi) {
    if (!(lo < hi)) return false;
    for (const auto& iv : x) {
      if (iv.lo < hi && lo < iv.hi) return true;
    }
    return false;
  };
  const Rational first = x.lower();
  const Rational last = x.upper();
  const std::size_t n = centers.size();
  std::vector<std::size_t> dist(n, std::numeric_limits<std::size_t>::max());
  std::queue<std::size_t> queue;
  for (std::size_t i = 0; i < n; ++i) {
    if (centers[i] - eps <= first) {
      dist[i] = 1;
      queue.push(i);
    }
  }
  while (!queue.empty()) {
    std::size_t i = queue.front();
    queue.pop();
    if (last <= centers[i] + eps) return dist[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dist[j] != std::numeric_limits<std::size_t>::max()) continue;
      if (meets_open(centers[i] + eps, centers[j] - eps)) continue;
      dist[j] = dist[i] + 1;
      queue.push(j);
    }
  }
  return std::numeric_limits<std::size_t>::max();
}

/// Σ coeffs[i]·base^i, evaluated term by term with fresh powers.
inline Rational horner_free_value(const std::vector<Rational>& coeffs, const Rational& base) {
  Rational s(0);
  for (std::size_t i = 0; i < coeffs.size(); ++i) s = s + coeffs[i] * pow(base, static_cast<int>(i));
  return s;
}

}  // namespace fracsep::testing

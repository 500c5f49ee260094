#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fracsep/error.hpp"
#include "fracsep/scalar.hpp"

namespace fracsep {

/// Closed interval [lo, hi]; lo == hi is a single point.
template <Scalar T>
struct Interval {
  T lo{};
  T hi{};

  T length() const { return hi - lo; }
  bool contains(const T& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of closed intervals kept sorted, disjoint and merged:
/// for consecutive members a_i <= b_i < a_{i+1}. Touching intervals merge.
template <Scalar T>
class IntervalSet {
 public:
  using interval_type = Interval<T>;

  IntervalSet() = default;
  explicit IntervalSet(std::vector<interval_type> pieces) : ivs_(std::move(pieces)) { normalize(); }
  IntervalSet(std::initializer_list<interval_type> pieces) : ivs_(pieces) { normalize(); }

  const std::vector<interval_type>& intervals() const noexcept { return ivs_; }
  std::size_t size() const noexcept { return ivs_.size(); }
  bool empty() const noexcept { return ivs_.empty(); }
  const interval_type& operator[](std::size_t i) const { return ivs_[i]; }
  auto begin() const noexcept { return ivs_.begin(); }
  auto end() const noexcept { return ivs_.end(); }

  const T& lower() const { return ivs_.front().lo; }
  const T& upper() const { return ivs_.back().hi; }

  /// Index of the first interval whose hi is >= x, or size().
  std::size_t first_not_below(const T& x) const {
    auto it = std::lower_bound(ivs_.begin(), ivs_.end(), x,
                               [](const interval_type& iv, const T& v) { return iv.hi < v; });
    return static_cast<std::size_t>(it - ivs_.begin());
  }

  bool contains(const T& x) const {
    std::size_t i = first_not_below(x);
    return i < ivs_.size() && ivs_[i].lo <= x;
  }

  /// Point-set inclusion: every member of other lies inside one member of this.
  bool contains(const IntervalSet& other) const {
    for (const auto& iv : other.ivs_) {
      std::size_t i = first_not_below(iv.lo);
      if (i == ivs_.size() || !ivs_[i].contains(iv)) return false;
    }
    return true;
  }

  bool intersects(const interval_type& window) const {
    std::size_t i = first_not_below(window.lo);
    return i < ivs_.size() && ivs_[i].lo <= window.hi;
  }

  IntervalSet clip(const interval_type& window) const {
    IntervalSet out;
    for (std::size_t i = first_not_below(window.lo); i < ivs_.size() && ivs_[i].lo <= window.hi; ++i) {
      out.ivs_.push_back({std::max(ivs_[i].lo, window.lo), std::min(ivs_[i].hi, window.hi)});
    }
    return out;
  }

  /// Image under x -> scale*x + shift.
  IntervalSet affine(const T& scale, const T& shift) const {
    std::vector<interval_type> out;
    out.reserve(ivs_.size());
    for (const auto& iv : ivs_) {
      T a = scale * iv.lo + shift;
      T b = scale * iv.hi + shift;
      out.push_back(a <= b ? interval_type{a, b} : interval_type{b, a});
    }
    return IntervalSet(std::move(out));
  }

  IntervalSet unite(const IntervalSet& other) const {
    std::vector<interval_type> all = ivs_;
    all.insert(all.end(), other.ivs_.begin(), other.ivs_.end());
    return IntervalSet(std::move(all));
  }

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  void normalize() {
    for (const auto& iv : ivs_) {
      if (iv.hi < iv.lo) fail(ErrorKind::Domain, "interval with hi < lo");
    }
    std::sort(ivs_.begin(), ivs_.end(), [](const interval_type& a, const interval_type& b) {
      return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
    });
    std::size_t w = 0;
    for (std::size_t r = 0; r < ivs_.size(); ++r) {
      if (w > 0 && ivs_[r].lo <= ivs_[w - 1].hi) {
        if (ivs_[w - 1].hi < ivs_[r].hi) ivs_[w - 1].hi = ivs_[r].hi;
      } else {
        ivs_[w++] = ivs_[r];
      }
    }
    ivs_.resize(w);
  }

  std::vector<interval_type> ivs_;
};

/// {a - b : a in A, b in B}.
template <Scalar T>
IntervalSet<T> minkowski_difference(const IntervalSet<T>& a, const IntervalSet<T>& b) {
  std::vector<Interval<T>> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) out.push_back({x.lo - y.hi, x.hi - y.lo});
  }
  return IntervalSet<T>(std::move(out));
}

/// Distance from a point to a nonempty set.
template <Scalar T>
T point_distance(const T& x, const IntervalSet<T>& s) {
  std::size_t i = s.first_not_below(x);
  if (i < s.size() && s[i].lo <= x) return T(0);
  if (i == s.size()) return x - s.upper();
  T right = s[i].lo - x;
  if (i == 0) return right;
  T left = x - s[i - 1].hi;
  return left < right ? left : right;
}

/// sup over a in A of dist(a, B). The distance function to B is piecewise
/// linear with local maxima only at gap midpoints of B, so the supremum over
/// A sits at an endpoint of A or at a B-gap midpoint inside A.
template <Scalar T>
T directed_hausdorff(const IntervalSet<T>& a, const IntervalSet<T>& b) {
  if (a.empty() || b.empty()) fail(ErrorKind::Domain, "hausdorff distance of an empty set");
  T best(0);
  for (const auto& iv : a) {
    T d1 = point_distance(iv.lo, b);
    T d2 = point_distance(iv.hi, b);
    if (best < d1) best = d1;
    if (best < d2) best = d2;
  }
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    T mid = (b[i].hi + b[i + 1].lo) / T(2);
    if (a.contains(mid)) {
      T d = mid - b[i].hi;
      if (best < d) best = d;
    }
  }
  return best;
}

template <Scalar T>
T hausdorff(const IntervalSet<T>& a, const IntervalSet<T>& b) {
  T ab = directed_hausdorff(a, b);
  T ba = directed_hausdorff(b, a);
  return ab < ba ? ba : ab;
}

/// CSV rows "lo,hi" in sorted order.
template <Scalar T>
void write_csv(std::ostream& os, const IntervalSet<T>& s, bool header = true) {
  if (header) os << "lo,hi\n";
  for (const auto& iv : s) os << format_scalar(iv.lo) << ',' << format_scalar(iv.hi) << '\n';
}

template <Scalar T>
IntervalSet<T> read_csv(std::istream& is) {
  std::vector<Interval<T>> out;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first && line == "lo,hi") {
      first = false;
      continue;
    }
    first = false;
    auto comma = line.find(',');
    if (comma == std::string::npos) fail(ErrorKind::Parse, "interval row without comma: '" + line + "'");
    out.push_back({parse_scalar<T>(line.substr(0, comma)), parse_scalar<T>(line.substr(comma + 1))});
  }
  return IntervalSet<T>(std::move(out));
}

}  // namespace fracsep

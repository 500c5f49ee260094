#include "fracsep/ifs.hpp"

#include <algorithm>
#include <string>

#include "fracsep/error.hpp"

namespace fracsep {

template <Scalar T>
Interval<T> compute_hull(const std::vector<Similarity<T>>& maps) {
  if (maps.empty()) fail(ErrorKind::Domain, "hull of an empty map list");
  T lo = maps.front().fixed_point();
  T hi = lo;
  for (const auto& f : maps) {
    T p = f.fixed_point();
    if (p < lo) lo = p;
    if (hi < p) hi = p;
  }
  Interval<T> hull{lo, hi};
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (!hull.contains(maps[i].image(hull))) {
      fail(ErrorKind::NotInvariant, "map " + std::to_string(i + 1) + " does not send the fixed-point hull [" +
                                        format_scalar(lo) + "," + format_scalar(hi) + "] into itself");
    }
  }
  return hull;
}

template <Scalar T>
Ifs<T>::Ifs(std::vector<Similarity<T>> maps) : maps_(std::move(maps)) {
  if (maps_.size() < 2) fail(ErrorKind::Domain, "an IFS needs at least two maps");
  if (maps_.size() > 255) fail(ErrorKind::Domain, "an IFS supports at most 255 maps");
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    const auto& f = maps_[i];
    if (!(T(0) < f.ratio && f.ratio < T(1))) {
      fail(ErrorKind::Domain, "map " + std::to_string(i + 1) + " ratio " + format_scalar(f.ratio) + " outside (0,1)");
    }
    if (f.sign != 1 && f.sign != -1) fail(ErrorKind::Domain, "map sign must be +1 or -1");
    if (f.sign < 0) orientation_preserving_ = false;
  }
  hull_ = compute_hull(maps_);
  cmin_ = maps_.front().ratio;
  cmax_ = maps_.front().ratio;
  for (const auto& f : maps_) {
    if (f.ratio < cmin_) cmin_ = f.ratio;
    if (cmax_ < f.ratio) cmax_ = f.ratio;
  }

  const T s = hull_.lo + hull_.hi;
  reflection_symmetric_ = std::all_of(maps_.begin(), maps_.end(), [&](const Similarity<T>& f) {
    Similarity<T> g = f.sign > 0 ? Similarity<T>{f.ratio, 1, s * (T(1) - f.ratio) - f.translation}
                                 : Similarity<T>{f.ratio, -1, s * (T(1) + f.ratio) - f.translation};
    return std::find(maps_.begin(), maps_.end(), g) != maps_.end();
  });
}

template <Scalar T>
Similarity<T> compose(const Ifs<T>& ifs, const Word& word) {
  Similarity<T> acc = Similarity<T>::identity();
  for (int idx : word) {
    if (idx < 1 || static_cast<std::size_t>(idx) > ifs.size()) {
      fail(ErrorKind::InvalidWord, "word '" + word.str() + "' has index " + std::to_string(idx) + " outside 1.." +
                                       std::to_string(ifs.size()));
    }
    acc = acc.after(ifs.map(idx));
  }
  return acc;
}

template <Scalar T>
ScaleCut<T> scale_cut(const Ifs<T>& ifs, const T& b, std::size_t word_budget) {
  if (!(T(0) < b && b < T(1))) fail(ErrorKind::Domain, "scale b = " + format_scalar(b) + " outside (0,1)");

  ScaleCut<T> cut{b, {}, {}};
  std::vector<std::uint8_t> path;
  const int m = static_cast<int>(ifs.size());

  // Depth-first with children visited in index order, which emits the
  // prefix-free leaves already in lexicographic order.
  auto visit = [&](auto&& self, const Similarity<T>& node) -> void {
    for (int i = 1; i <= m; ++i) {
      Similarity<T> child = node.after(ifs.map(i));
      path.push_back(static_cast<std::uint8_t>(i));
      if (child.ratio <= b) {
        if (cut.words.size() >= word_budget) {
          fail(ErrorKind::BudgetExceeded,
               "scale cut at b = " + format_scalar(b) + " exceeds the word budget of " + std::to_string(word_budget));
        }
        cut.words.emplace_back(path);
        cut.maps.push_back(child);
      } else {
        self(self, child);
      }
      path.pop_back();
    }
  };
  visit(visit, Similarity<T>::identity());
  return cut;
}

#define FRACSEP_INSTANTIATE(T)                                                        \
  template Interval<T> compute_hull<T>(const std::vector<Similarity<T>>&);           \
  template class Ifs<T>;                                                              \
  template Similarity<T> compose<T>(const Ifs<T>&, const Word&);                      \
  template ScaleCut<T> scale_cut<T>(const Ifs<T>&, const T&, std::size_t);

FRACSEP_INSTANTIATE(Rational)
FRACSEP_INSTANTIATE(double)

#undef FRACSEP_INSTANTIATE

}  // namespace fracsep

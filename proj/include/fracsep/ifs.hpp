#pragma once

#include <cstddef>
#include <vector>

#include "fracsep/interval_set.hpp"
#include "fracsep/scalar.hpp"
#include "fracsep/word.hpp"

namespace fracsep {

/// x -> sign*ratio*x + translation.
template <Scalar T>
struct Similarity {
  T ratio{1};
  int sign = 1;
  T translation{0};

  static Similarity identity() { return {T(1), 1, T(0)}; }

  T apply(const T& x) const { return sign > 0 ? ratio * x + translation : translation - ratio * x; }

  /// this ∘ inner.
  Similarity after(const Similarity& inner) const {
    T scaled = ratio * inner.translation;
    return {ratio * inner.ratio, sign * inner.sign, sign > 0 ? scaled + translation : translation - scaled};
  }

  T fixed_point() const { return translation / (T(1) - T(sign) * ratio); }

  Interval<T> image(const Interval<T>& iv) const {
    T a = apply(iv.lo);
    T b = apply(iv.hi);
    return a <= b ? Interval<T>{a, b} : Interval<T>{b, a};
  }

  friend bool operator==(const Similarity&, const Similarity&) = default;
};

/// Smallest interval spanned by the member fixed points, verified invariant
/// under every map. Throws NotInvariant when some image escapes it.
template <Scalar T>
Interval<T> compute_hull(const std::vector<Similarity<T>>& maps);

/// A finite system of contracting similarities on the line. Immutable.
template <Scalar T>
class Ifs {
 public:
  explicit Ifs(std::vector<Similarity<T>> maps);

  const std::vector<Similarity<T>>& maps() const noexcept { return maps_; }
  /// 1-based, matching word indices.
  const Similarity<T>& map(int index) const { return maps_[static_cast<std::size_t>(index - 1)]; }
  std::size_t size() const noexcept { return maps_.size(); }

  const Interval<T>& hull() const noexcept { return hull_; }
  T diameter() const { return hull_.hi - hull_.lo; }
  const T& cmin() const noexcept { return cmin_; }
  const T& cmax() const noexcept { return cmax_; }

  bool orientation_preserving() const noexcept { return orientation_preserving_; }
  /// True when the map set is invariant under conjugation by x -> (L+R) - x,
  /// which makes the attractor symmetric about the hull midpoint.
  bool reflection_symmetric() const noexcept { return reflection_symmetric_; }

 private:
  std::vector<Similarity<T>> maps_;
  Interval<T> hull_;
  T cmin_;
  T cmax_;
  bool orientation_preserving_ = true;
  bool reflection_symmetric_ = false;
};

inline constexpr std::size_t kDefaultWordBudget = std::size_t{1} << 22;

/// The antichain I_b = {α : c_α <= b < c_parent(α)} in lexicographic order,
/// with the composed map of every word.
template <Scalar T>
struct ScaleCut {
  T b;
  std::vector<Word> words;
  std::vector<Similarity<T>> maps;

  std::size_t size() const noexcept { return words.size(); }
  const T& ratio(std::size_t i) const { return maps[i].ratio; }
};

/// f_{i1} ∘ ... ∘ f_{ik}; the empty word gives the identity.
template <Scalar T>
Similarity<T> compose(const Ifs<T>& ifs, const Word& word);

template <Scalar T>
ScaleCut<T> scale_cut(const Ifs<T>& ifs, const T& b, std::size_t word_budget = kDefaultWordBudget);

template <Scalar T>
const Interval<T>& hull(const Ifs<T>& ifs) {
  return ifs.hull();
}

}  // namespace fracsep

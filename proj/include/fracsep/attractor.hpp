#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fracsep/ifs.hpp"
#include "fracsep/interval_set.hpp"

namespace fracsep {

/// Union of f_α(hull) over α in I_b. Contains K and lies within
/// b·diam(hull) of it in Hausdorff distance.
template <Scalar T>
IntervalSet<T> cover(const Ifs<T>& ifs, const T& b, std::size_t word_budget = kDefaultWordBudget);

template <Scalar T>
IntervalSet<T> cover_from_cut(const Ifs<T>& ifs, const ScaleCut<T>& cut);

/// Finite prefix of an infinite code. value = f_word(L) is an exact point of
/// K; every point coded by an extension of word lies within errorBound.
template <Scalar T>
struct PointCode {
  Word word;
  T value;
  T errorBound;
};

template <Scalar T>
PointCode<T> point_at(const Ifs<T>& ifs, const Word& word);

/// The set cPlus·K - cMinus·K + deltaQ, i.e. f_α(K) - f_β(K) for
/// orientation-preserving f_α, f_β. Ordered lexicographically.
template <Scalar T>
struct DiffClass {
  T cPlus;
  T cMinus;
  T deltaQ;

  Interval<T> hull_image(const Interval<T>& hull) const {
    return {cPlus * hull.lo - cMinus * hull.hi + deltaQ, cPlus * hull.hi - cMinus * hull.lo + deltaQ};
  }

  /// Same set written the other way round, valid when K = s - K.
  DiffClass reflected(const T& s) const { return {cMinus, cPlus, deltaQ + (cPlus - cMinus) * s}; }

  std::string str() const { return format_scalar(cPlus) + ";" + format_scalar(cMinus) + ";" + format_scalar(deltaQ); }

  friend bool operator==(const DiffClass&, const DiffClass&) = default;
  friend auto operator<=>(const DiffClass& a, const DiffClass& b) {
    if (auto c = a.cPlus <=> b.cPlus; c != 0) return c;
    if (auto c = a.cMinus <=> b.cMinus; c != 0) return c;
    return a.deltaQ <=> b.deltaQ;
  }
};

template <Scalar T>
struct DiffClassSet {
  T b;
  std::size_t wordCount = 0;
  /// True when reflection canonicalization (cPlus >= cMinus) was applied.
  bool reflectionMerged = false;
  std::vector<DiffClass<T>> classes;
};

/// Deduplicated classes of I_b × I_b. Tuple equality always merges; on a
/// reflection-symmetric IFS the tuple is first canonicalized so that
/// cPlus >= cMinus. Throws UnsupportedOrientation if any map has sign -1.
template <Scalar T>
DiffClassSet<T> diff_classes(const Ifs<T>& ifs, const T& b, std::size_t word_budget = kDefaultWordBudget);

template <Scalar T>
IntervalSet<T> diff_cover(const Ifs<T>& ifs, const T& b, std::size_t word_budget = kDefaultWordBudget);

template <Scalar T>
IntervalSet<T> diff_cover_from_classes(const Ifs<T>& ifs, const DiffClassSet<T>& classes);

/// cPlus·E - cMinus·E + deltaQ for a cover E of K.
template <Scalar T>
IntervalSet<T> refined_class_set(const DiffClass<T>& cls, const IntervalSet<T>& k_cover);

enum class CountTarget { DiffClasses, Pieces };

/// Number of classes of diff_classes(ifs, r) (or, for Pieces, words of I_r)
/// whose set meets the closed ball [z - r, z + r]. With refine_depth > 0
/// each hull image is replaced by the image of cover(ifs, cmax^depth).
template <Scalar T>
std::size_t local_class_count(const Ifs<T>& ifs, const T& z, const T& r, CountTarget target = CountTarget::DiffClasses,
                              int refine_depth = 0, std::size_t word_budget = kDefaultWordBudget);

/// max over every real z of the depth-0 local class count at radius r.
template <Scalar T>
std::size_t max_local_class_count(const Ifs<T>& ifs, const T& r, CountTarget target = CountTarget::DiffClasses,
                                  std::size_t word_budget = kDefaultWordBudget);

enum class ClassRelation { Distinct, Undetermined };

/// Escalating set-equality check for two classes that tuple and reflection
/// merging left apart. Unequal hull images certify distinct sets. Otherwise
/// refined covers at depths 1..max_depth are compared and the pair is
/// certified distinct once their Hausdorff distance exceeds the combined
/// refinement error; if no depth certifies, the pair is Undetermined.
template <Scalar T>
class ClassComparator {
 public:
  ClassComparator(const Ifs<T>& ifs, int max_depth);

  ClassRelation relate(const DiffClass<T>& a, const DiffClass<T>& b) const;
  int max_depth() const noexcept { return max_depth_; }

 private:
  const Ifs<T>* ifs_;
  int max_depth_;
  std::vector<IntervalSet<T>> covers_;  // covers_[d-1] = cover(ifs, cmax^d)
  std::vector<T> errors_;               // cmax^d · diam(hull)
};

}  // namespace fracsep

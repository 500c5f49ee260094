#include "fracsep/attractor.hpp"

#include <algorithm>
#include <functional>
#include <type_traits>
#include <unordered_set>

#include "fracsep/error.hpp"

namespace fracsep {
namespace {

std::size_t hash_scalar(const Rational& r) {
  std::size_t h = std::hash<std::int64_t>{}(r.num());
  return h ^ (std::hash<std::int64_t>{}(r.den()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t hash_scalar(double d) { return std::hash<double>{}(d == 0.0 ? 0.0 : d); }

template <Scalar T>
struct ClassHash {
  std::size_t operator()(const DiffClass<T>& c) const {
    std::size_t h = hash_scalar(c.cPlus);
    h = h * 31 + hash_scalar(c.cMinus);
    return h * 31 + hash_scalar(c.deltaQ);
  }
};

template <Scalar T>
void require_orientation_preserving(const Ifs<T>& ifs) {
  if (!ifs.orientation_preserving()) {
    fail(ErrorKind::UnsupportedOrientation, "difference classes need every map to preserve orientation (sign +1)");
  }
}

// Floating-point compositions that are equal in exact arithmetic can differ
// in the last bits. Values within a relative 1e-12 of the first member of a
// sorted run are replaced by that member; exact types are left alone.
template <Scalar T>
void snap_runs(std::vector<T*>& refs, const T& scale) {
  if constexpr (std::is_same_v<T, double>) {
    std::sort(refs.begin(), refs.end(), [](const T* a, const T* b) { return *a < *b; });
    const double tol = 1e-12 * scale;
    for (std::size_t i = 0; i < refs.size();) {
      std::size_t j = i + 1;
      while (j < refs.size() && *refs[j] - *refs[i] <= tol) *refs[j++] = *refs[i];
      i = j;
    }
  } else {
    (void)refs;
    (void)scale;
  }
}

template <Scalar T>
void snap_classes(std::vector<DiffClass<T>>& classes, const T& diam) {
  if constexpr (std::is_same_v<T, double>) {
    std::vector<T*> ratios;
    for (auto& c : classes) {
      ratios.push_back(&c.cPlus);
      ratios.push_back(&c.cMinus);
    }
    // Ratios of one cut lie within a bounded factor, so an absolute tolerance
    // relative to the largest is enough.
    T top = 0;
    for (const T* r : ratios) top = std::max(top, *r);
    snap_runs(ratios, top);
    std::sort(classes.begin(), classes.end());
    for (std::size_t i = 0; i < classes.size();) {
      std::size_t j = i;
      std::vector<T*> shifts;
      while (j < classes.size() && classes[j].cPlus == classes[i].cPlus && classes[j].cMinus == classes[i].cMinus) {
        shifts.push_back(&classes[j++].deltaQ);
      }
      snap_runs(shifts, diam);
      i = j;
    }
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  } else {
    (void)classes;
    (void)diam;
  }
}

}  // namespace

template <Scalar T>
IntervalSet<T> cover_from_cut(const Ifs<T>& ifs, const ScaleCut<T>& cut) {
  std::vector<Interval<T>> pieces;
  pieces.reserve(cut.size());
  for (const auto& f : cut.maps) pieces.push_back(f.image(ifs.hull()));
  return IntervalSet<T>(std::move(pieces));
}

template <Scalar T>
IntervalSet<T> cover(const Ifs<T>& ifs, const T& b, std::size_t word_budget) {
  return cover_from_cut(ifs, scale_cut(ifs, b, word_budget));
}

template <Scalar T>
PointCode<T> point_at(const Ifs<T>& ifs, const Word& word) {
  if (word.empty()) fail(ErrorKind::Domain, "point_at needs a nonempty word");
  Similarity<T> f = compose(ifs, word);
  return {word, f.apply(ifs.hull().lo), f.ratio * ifs.diameter()};
}

template <Scalar T>
DiffClassSet<T> diff_classes(const Ifs<T>& ifs, const T& b, std::size_t word_budget) {
  require_orientation_preserving(ifs);
  ScaleCut<T> cut = scale_cut(ifs, b, word_budget);

  // Distinct (ratio, translation) pairs first; overlapping systems can repeat maps.
  std::vector<Similarity<T>> maps = cut.maps;
  std::sort(maps.begin(), maps.end(), [](const Similarity<T>& x, const Similarity<T>& y) {
    return x.ratio < y.ratio || (x.ratio == y.ratio && x.translation < y.translation);
  });
  maps.erase(std::unique(maps.begin(), maps.end()), maps.end());

  const bool reflect = ifs.reflection_symmetric();
  const T s = ifs.hull().lo + ifs.hull().hi;

  std::unordered_set<DiffClass<T>, ClassHash<T>> seen;
  seen.reserve(std::min<std::size_t>(maps.size() * maps.size(), std::size_t{1} << 24));
  for (const auto& fa : maps) {
    for (const auto& fb : maps) {
      DiffClass<T> c{fa.ratio, fb.ratio, fa.translation - fb.translation};
      if (reflect && c.cPlus < c.cMinus) c = c.reflected(s);
      seen.insert(c);
    }
  }

  DiffClassSet<T> out{b, cut.size(), reflect, {}};
  out.classes.assign(seen.begin(), seen.end());
  std::sort(out.classes.begin(), out.classes.end());
  snap_classes(out.classes, ifs.diameter());
  return out;
}

template <Scalar T>
IntervalSet<T> diff_cover_from_classes(const Ifs<T>& ifs, const DiffClassSet<T>& classes) {
  std::vector<Interval<T>> pieces;
  pieces.reserve(classes.classes.size());
  for (const auto& c : classes.classes) pieces.push_back(c.hull_image(ifs.hull()));
  return IntervalSet<T>(std::move(pieces));
}

template <Scalar T>
IntervalSet<T> diff_cover(const Ifs<T>& ifs, const T& b, std::size_t word_budget) {
  return diff_cover_from_classes(ifs, diff_classes(ifs, b, word_budget));
}

template <Scalar T>
IntervalSet<T> refined_class_set(const DiffClass<T>& cls, const IntervalSet<T>& k_cover) {
  return minkowski_difference(k_cover.affine(cls.cPlus, cls.deltaQ), k_cover.affine(cls.cMinus, T(0)));
}

template <Scalar T>
std::size_t local_class_count(const Ifs<T>& ifs, const T& z, const T& r, CountTarget target, int refine_depth,
                              std::size_t word_budget) {
  if (!(T(0) < r && r < T(1))) fail(ErrorKind::Domain, "radius r = " + format_scalar(r) + " outside (0,1)");
  if (refine_depth < 0) fail(ErrorKind::Domain, "refine depth must be nonnegative");
  const Interval<T> ball{z - r, z + r};

  IntervalSet<T> k_cover;
  if (refine_depth > 0) k_cover = cover(ifs, scalar_pow(ifs.cmax(), refine_depth), word_budget);

  std::size_t count = 0;
  if (target == CountTarget::Pieces) {
    ScaleCut<T> cut = scale_cut(ifs, r, word_budget);
    for (const auto& f : cut.maps) {
      if (!f.image(ifs.hull()).intersects(ball)) continue;
      if (refine_depth == 0 || k_cover.affine(T(f.sign) * f.ratio, f.translation).intersects(ball)) ++count;
    }
    return count;
  }

  DiffClassSet<T> classes = diff_classes(ifs, r, word_budget);
  for (const auto& c : classes.classes) {
    if (!c.hull_image(ifs.hull()).intersects(ball)) continue;
    if (refine_depth == 0 || refined_class_set(c, k_cover).intersects(ball)) ++count;
  }
  return count;
}

template <Scalar T>
std::size_t max_local_class_count(const Ifs<T>& ifs, const T& r, CountTarget target, std::size_t word_budget) {
  if (!(T(0) < r && r < T(1))) fail(ErrorKind::Domain, "radius r = " + format_scalar(r) + " outside (0,1)");
  // A closed set [lo, hi] meets [z - r, z + r] iff z lies in [lo - r, hi + r];
  // the answer is the maximum overlap depth of those widened intervals.
  std::vector<Interval<T>> widened;
  if (target == CountTarget::Pieces) {
    for (const auto& f : scale_cut(ifs, r, word_budget).maps) {
      auto iv = f.image(ifs.hull());
      widened.push_back({iv.lo - r, iv.hi + r});
    }
  } else {
    for (const auto& c : diff_classes(ifs, r, word_budget).classes) {
      auto iv = c.hull_image(ifs.hull());
      widened.push_back({iv.lo - r, iv.hi + r});
    }
  }
  std::vector<std::pair<T, int>> events;  // (coordinate, 0 = open, 1 = close)
  events.reserve(2 * widened.size());
  for (const auto& iv : widened) {
    events.push_back({iv.lo, 0});
    events.push_back({iv.hi, 1});
  }
  std::sort(events.begin(), events.end());
  std::size_t depth = 0;
  std::size_t best = 0;
  for (const auto& [x, kind] : events) {
    if (kind == 0) {
      best = std::max(best, ++depth);
    } else {
      --depth;
    }
  }
  return best;
}

template <Scalar T>
ClassComparator<T>::ClassComparator(const Ifs<T>& ifs, int max_depth) : ifs_(&ifs), max_depth_(max_depth) {
  require_orientation_preserving(ifs);
  if (max_depth < 0) fail(ErrorKind::Domain, "merge depth budget must be nonnegative");
  for (int d = 1; d <= max_depth; ++d) {
    T scale = scalar_pow(ifs.cmax(), d);
    covers_.push_back(cover(ifs, scale));
    errors_.push_back(scale * ifs.diameter());
  }
}

template <Scalar T>
ClassRelation ClassComparator<T>::relate(const DiffClass<T>& a, const DiffClass<T>& b) const {
  if (a.hull_image(ifs_->hull()) != b.hull_image(ifs_->hull())) return ClassRelation::Distinct;
  const T weight = a.cPlus + a.cMinus + b.cPlus + b.cMinus;
  for (std::size_t d = 0; d < covers_.size(); ++d) {
    T gap = hausdorff(refined_class_set(a, covers_[d]), refined_class_set(b, covers_[d]));
    if (weight * errors_[d] < gap) return ClassRelation::Distinct;
  }
  return ClassRelation::Undetermined;
}

#define FRACSEP_INSTANTIATE(T)                                                                                   \
  template IntervalSet<T> cover<T>(const Ifs<T>&, const T&, std::size_t);                                        \
  template IntervalSet<T> cover_from_cut<T>(const Ifs<T>&, const ScaleCut<T>&);                                  \
  template PointCode<T> point_at<T>(const Ifs<T>&, const Word&);                                                 \
  template DiffClassSet<T> diff_classes<T>(const Ifs<T>&, const T&, std::size_t);                                \
  template IntervalSet<T> diff_cover<T>(const Ifs<T>&, const T&, std::size_t);                                   \
  template IntervalSet<T> diff_cover_from_classes<T>(const Ifs<T>&, const DiffClassSet<T>&);                     \
  template IntervalSet<T> refined_class_set<T>(const DiffClass<T>&, const IntervalSet<T>&);                      \
  template std::size_t local_class_count<T>(const Ifs<T>&, const T&, const T&, CountTarget, int, std::size_t);   \
  template std::size_t max_local_class_count<T>(const Ifs<T>&, const T&, CountTarget, std::size_t);              \
  template class ClassComparator<T>;

FRACSEP_INSTANTIATE(Rational)
FRACSEP_INSTANTIATE(double)

#undef FRACSEP_INSTANTIATE

}  // namespace fracsep

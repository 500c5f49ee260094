#include "fracsep/separation.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <type_traits>
#include <set>
#include <utility>

#include "fracsep/error.hpp"
#include "fracsep/parallel.hpp"

namespace fracsep {
namespace {

template <Scalar T>
bool same_point(const T& a, const T& b, const T& diam) {
  if constexpr (is_exact_v<T>) {
    (void)diam;
    return a == b;
  } else {
    return abs(a - b) <= 1e-12 * (diam > 0 ? diam : 1.0);
  }
}

template <Scalar T>
void finish_verdict(SeparationReport<T>& r, const std::optional<T>& threshold) {
  r.threshold = threshold;
  if (r.undeterminedPairs > 0) {
    r.verdict = Verdict::Undetermined;
  } else if (!r.epsStar) {
    r.verdict = Verdict::Pass;
  } else if (threshold) {
    r.verdict = *r.epsStar >= *threshold ? Verdict::Pass : Verdict::Fail;
  } else {
    r.verdict = T(0) < *r.epsStar ? Verdict::Pass : Verdict::Fail;
  }
}

// Pairs of class indices (i < j) that tuple/reflection merging kept apart
// but the escalation could not certify as distinct sets.
template <Scalar T>
std::set<std::pair<std::size_t, std::size_t>> undetermined_pairs(const Ifs<T>& ifs, const DiffClassSet<T>& set,
                                                                 int merge_depth) {
  std::set<std::pair<std::size_t, std::size_t>> out;
  const auto& cls = set.classes;
  std::vector<std::size_t> order(cls.size());
  std::iota(order.begin(), order.end(), 0);
  auto hull_of = [&](std::size_t i) { return cls[i].hull_image(ifs.hull()); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    auto ha = hull_of(a);
    auto hb = hull_of(b);
    return ha.lo < hb.lo || (ha.lo == hb.lo && (ha.hi < hb.hi || (ha.hi == hb.hi && a < b)));
  });
  std::optional<ClassComparator<T>> cmp;
  for (std::size_t s = 0; s < order.size();) {
    std::size_t e = s + 1;
    while (e < order.size() && hull_of(order[e]) == hull_of(order[s])) ++e;
    for (std::size_t i = s; i < e; ++i) {
      for (std::size_t j = i + 1; j < e; ++j) {
        if (!cmp) cmp.emplace(ifs, merge_depth);
        if (cmp->relate(cls[order[i]], cls[order[j]]) == ClassRelation::Undetermined) {
          out.insert(std::minmax(order[i], order[j]));
        }
      }
    }
    s = e;
  }
  return out;
}

// Points in R^dim tagged with their class; finds the L∞-nearest pair of
// points with different tags, skipping excluded tag pairs.
template <Scalar T>
struct NearestPair {
  std::optional<T> best;
  std::size_t tagA = 0;
  std::size_t tagB = 0;
};

template <Scalar T>
NearestPair<T> nearest_pair(const std::vector<T>& coords, const std::vector<std::size_t>& tags, std::size_t dim,
                            const std::set<std::pair<std::size_t, std::size_t>>& excluded, PairSearch search) {
  const std::size_t n = tags.size();
  NearestPair<T> out;
  auto consider = [&](std::size_t i, std::size_t j) {
    if (tags[i] == tags[j]) return;
    if (!excluded.empty() && excluded.count(std::minmax(tags[i], tags[j]))) return;
    const T* a = &coords[i * dim];
    const T* b = &coords[j * dim];
    T d(0);
    for (std::size_t k = 0; k < dim; ++k) {
      T diff = abs(a[k] - b[k]);
      if (d < diff) {
        d = diff;
        if (out.best && !(d < *out.best)) return;
      }
    }
    if (!out.best || d < *out.best) {
      out.best = d;
      out.tagA = std::min(tags[i], tags[j]);
      out.tagB = std::max(tags[i], tags[j]);
    }
  };

  if (search == PairSearch::BruteForce || (search == PairSearch::Auto && n < kBruteForceLimit)) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) consider(i, j);
    return out;
  }

  // Sort by the first coordinate; once the first-coordinate gap alone reaches
  // the current minimum no later candidate can improve it.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return coords[a * dim] < coords[b * dim]; });
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (out.best && !(coords[order[q] * dim] - coords[order[p] * dim] < *out.best)) break;
      consider(order[p], order[q]);
    }
  }
  return out;
}

}  // namespace

template <Scalar T>
TestPoints<T>::TestPoints(std::vector<T> pts) : pts_(std::move(pts)) {
  if (pts_.empty()) fail(ErrorKind::Domain, "test point set must be nonempty");
  std::sort(pts_.begin(), pts_.end());
  pts_.erase(std::unique(pts_.begin(), pts_.end()), pts_.end());
}

template <Scalar T>
TestPoints<T> TestPoints<T>::hull_endpoints(const Ifs<T>& ifs) {
  return TestPoints({ifs.hull().lo, ifs.hull().hi});
}

template <Scalar T>
TestPoints<T> TestPoints<T>::from_words(const Ifs<T>& ifs, const std::vector<Word>& words) {
  std::vector<T> v;
  for (const auto& w : words) v.push_back(point_at(ifs, w).value);
  return TestPoints(std::move(v));
}

template <Scalar T>
TestPoints<T> TestPoints<T>::net(const Ifs<T>& ifs, const T& spacing, std::size_t word_budget) {
  if (!(T(0) < spacing)) fail(ErrorKind::Domain, "net spacing must be positive");
  if (!(spacing < ifs.diameter())) return hull_endpoints(ifs);
  ScaleCut<T> cut = scale_cut(ifs, spacing / ifs.diameter(), word_budget);
  std::vector<T> v;
  v.reserve(cut.size() + 1);
  for (const auto& f : cut.maps) v.push_back(f.apply(ifs.hull().lo));
  v.push_back(ifs.hull().hi);
  return TestPoints(std::move(v));
}

template <Scalar T>
TestPoints<T> TestPoints<T>::certify(const Ifs<T>& ifs, const std::vector<T>& values, int max_depth) {
  const auto& hull = ifs.hull();
  const T diam = ifs.diameter();
  std::size_t budget = 0;
  auto member = [&](auto&& self, const T& x, int depth) -> bool {
    if (same_point(x, hull.lo, diam) || same_point(x, hull.hi, diam)) return true;
    if (depth == max_depth || ++budget > 200000) return false;
    for (const auto& f : ifs.maps()) {
      if (!f.image(hull).contains(x)) continue;
      T pre = T(f.sign) * (x - f.translation) / f.ratio;
      if (self(self, pre, depth + 1)) return true;
    }
    return false;
  };
  for (const auto& x : values) {
    budget = 0;
    if (!member(member, x, 0)) {
      fail(ErrorKind::Domain, "test point " + format_scalar(x) + " is not certified as a point of the attractor");
    }
  }
  return TestPoints(values);
}

template <Scalar T>
SeparationReport<T> wsp_min_separation(const Ifs<T>& ifs, const T& b, const SeparationOptions<T>& opts) {
  ScaleCut<T> cut = scale_cut(ifs, b, opts.wordBudget);

  // One representative word per distinct composed map; equal maps are the
  // first alternative of the property and contribute nothing.
  std::map<std::tuple<T, int, T>, std::size_t> first;
  for (std::size_t i = 0; i < cut.size(); ++i) {
    const auto& f = cut.maps[i];
    first.emplace(std::make_tuple(f.ratio, f.sign, f.translation), i);
  }
  std::vector<std::size_t> reps;
  for (const auto& [key, idx] : first) reps.push_back(idx);
  std::sort(reps.begin(), reps.end());

  SeparationReport<T> r;
  r.checker = "wsp";
  r.b = b;
  r.wordCount = cut.size();
  r.classCount = reps.size();
  const auto& hull = ifs.hull();
  for (std::size_t ia : reps) {
    const auto& fa = cut.maps[ia];
    for (std::size_t ib : reps) {
      if (ia == ib) continue;
      const auto& fb = cut.maps[ib];
      // f_a^{-1}(y) = s_a (y - q_a) / c_a, so f_a^{-1} f_b is affine.
      T slope = T(fa.sign * fb.sign) * fb.ratio / fa.ratio;
      T offset = T(fa.sign) * (fb.translation - fa.translation) / fa.ratio;
      T dev = sup_deviation(slope, offset, hull);
      // Rounding can keep apart maps that are equal in exact arithmetic.
      if constexpr (std::is_same_v<T, double>) {
        if (dev <= 1e-12 * ifs.diameter()) continue;
      }
      if (!r.gap || dev < *r.gap) {
        r.gap = dev;
        r.witnessA = cut.words[ia].str();
        r.witnessB = cut.words[ib].str();
      }
    }
  }
  r.epsStar = r.gap;
  finish_verdict(r, opts.threshold);
  return r;
}

template <Scalar T>
SeparationReport<T> wsd_report(const Ifs<T>& ifs, const T& b, const TestPoints<T>& pts,
                               const SeparationOptions<T>& opts) {
  DiffClassSet<T> set = diff_classes(ifs, b, opts.wordBudget);
  const auto& cls = set.classes;
  const auto& x = pts.points();
  const std::size_t dim = x.size() * x.size();
  const T s = ifs.hull().lo + ifs.hull().hi;

  // Every class contributes the test-point evaluations of each tuple that
  // writes it; after reflection merging a class can have two.
  std::vector<T> coords;
  std::vector<std::size_t> tags;
  auto push = [&](const DiffClass<T>& c, std::size_t tag) {
    for (const auto& xi : x)
      for (const auto& xj : x) coords.push_back(c.cPlus * xi - c.cMinus * xj + c.deltaQ);
    tags.push_back(tag);
  };
  for (std::size_t i = 0; i < cls.size(); ++i) {
    push(cls[i], i);
    if (set.reflectionMerged && cls[i].cPlus != cls[i].cMinus) push(cls[i].reflected(s), i);
  }

  auto excluded = undetermined_pairs(ifs, set, opts.mergeDepthBudget);
  NearestPair<T> np = nearest_pair(coords, tags, dim, excluded, opts.search);

  SeparationReport<T> r;
  r.checker = "wsd";
  r.b = b;
  r.wordCount = set.wordCount;
  r.classCount = cls.size();
  r.undeterminedPairs = excluded.size();
  if (np.best) {
    r.gap = np.best;
    r.epsStar = *np.best / b;
    r.witnessA = cls[np.tagA].str();
    r.witnessB = cls[np.tagB].str();
  }
  finish_verdict(r, opts.threshold);
  return r;
}

template <Scalar T>
SeparationReport<T> wsd_hausdorff_report(const Ifs<T>& ifs, const T& b, int depth, const SeparationOptions<T>& opts) {
  if (depth < 0) fail(ErrorKind::Domain, "refinement depth must be nonnegative");
  DiffClassSet<T> set = diff_classes(ifs, b, opts.wordBudget);
  const auto& cls = set.classes;
  const std::size_t n = cls.size();

  std::vector<IntervalSet<T>> sets;
  sets.reserve(n);
  if (depth == 0) {
    for (const auto& c : cls) sets.push_back(IntervalSet<T>{c.hull_image(ifs.hull())});
  } else {
    IntervalSet<T> k_cover = cover(ifs, scalar_pow(ifs.cmax(), depth), opts.wordBudget);
    for (const auto& c : cls) sets.push_back(refined_class_set(c, k_cover));
  }

  auto excluded = undetermined_pairs(ifs, set, opts.mergeDepthBudget);

  // d_H(A, B) >= max(|min A - min B|, |max A - max B|), which prunes both
  // the sweep and individual pairs before the exact sweep-line distance.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t c) { return sets[a].lower() < sets[c].lower(); });
  std::optional<T> best;
  std::size_t wa = 0, wb = 0;
  for (std::size_t p = 0; p < n; ++p) {
    const auto& A = sets[order[p]];
    for (std::size_t q = p + 1; q < n; ++q) {
      const auto& B = sets[order[q]];
      T lo_gap = B.lower() - A.lower();
      if (best && !(lo_gap < *best)) break;
      if (!excluded.empty() && excluded.count(std::minmax(order[p], order[q]))) continue;
      T hi_gap = abs(B.upper() - A.upper());
      T lb = lo_gap < hi_gap ? hi_gap : lo_gap;
      if (best && !(lb < *best)) continue;
      T d = depth == 0 ? lb : hausdorff(A, B);
      if (!best || d < *best) {
        best = d;
        wa = std::min(order[p], order[q]);
        wb = std::max(order[p], order[q]);
      }
    }
  }

  SeparationReport<T> r;
  r.checker = "wsd-hausdorff";
  r.b = b;
  r.wordCount = set.wordCount;
  r.classCount = n;
  r.undeterminedPairs = excluded.size();
  r.refinementError = T(4) * scalar_pow(ifs.cmax(), depth) * ifs.diameter();
  if (best) {
    r.gap = best;
    r.epsStar = *best / b;
    r.witnessA = cls[wa].str();
    r.witnessB = cls[wb].str();
  }
  finish_verdict(r, opts.threshold);
  return r;
}

template <Scalar T>
ScanResult<T> scan_scales(const Ifs<T>& ifs, const std::vector<T>& bList, Checker checker, const TestPoints<T>& pts,
                          const SeparationOptions<T>& opts, int hausdorff_depth, unsigned threads) {
  for (std::size_t i = 0; i < bList.size(); ++i) {
    if (!(T(0) < bList[i] && bList[i] < T(1))) {
      fail(ErrorKind::Domain, "scale " + format_scalar(bList[i]) + " outside (0,1)");
    }
    if (i > 0 && !(bList[i] < bList[i - 1])) fail(ErrorKind::Ordering, "scale list must be strictly decreasing");
  }

  std::vector<std::optional<SeparationReport<T>>> slots(bList.size());
  std::vector<std::string> errors(bList.size());
  parallel_for(bList.size(), threads, [&](std::size_t i) {
    try {
      switch (checker) {
        case Checker::Wsp: slots[i] = wsp_min_separation(ifs, bList[i], opts); break;
        case Checker::Wsd: slots[i] = wsd_report(ifs, bList[i], pts, opts); break;
        case Checker::WsdHausdorff: slots[i] = wsd_hausdorff_report(ifs, bList[i], hausdorff_depth, opts); break;
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::BudgetExceeded) throw;
      errors[i] = e.what();
    }
  });

  ScanResult<T> out;
  for (std::size_t i = 0; i < bList.size(); ++i) {
    if (!slots[i]) {
      out.aborted = true;
      out.abortMessage = errors[i];
      break;
    }
    out.reports.push_back(std::move(*slots[i]));
  }
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

template <Scalar T>
void write_reports_csv(std::ostream& os, const std::vector<SeparationReport<T>>& reports, bool header,
                       std::string_view series) {
  if (header) {
    if (!series.empty()) os << "series,";
    os << "b,word_count,class_count,eps_star,witness_a,witness_b,verdict\n";
  }
  for (const auto& r : reports) {
    if (!series.empty()) os << csv_field(series) << ',';
    os << format_scalar(r.b) << ',' << r.wordCount << ',' << r.classCount << ','
       << (r.epsStar ? format_scalar(*r.epsStar) : std::string("inf")) << ',' << csv_field(r.witnessA) << ','
       << csv_field(r.witnessB) << ',' << to_string(r.verdict) << '\n';
  }
}

#define FRACSEP_INSTANTIATE(T)                                                                                   \
  template class TestPoints<T>;                                                                                  \
  template SeparationReport<T> wsp_min_separation<T>(const Ifs<T>&, const T&, const SeparationOptions<T>&);      \
  template SeparationReport<T> wsd_report<T>(const Ifs<T>&, const T&, const TestPoints<T>&,                      \
                                             const SeparationOptions<T>&);                                       \
  template SeparationReport<T> wsd_hausdorff_report<T>(const Ifs<T>&, const T&, int, const SeparationOptions<T>&); \
  template ScanResult<T> scan_scales<T>(const Ifs<T>&, const std::vector<T>&, Checker, const TestPoints<T>&,     \
                                        const SeparationOptions<T>&, int, unsigned);                             \
  template void write_reports_csv<T>(std::ostream&, const std::vector<SeparationReport<T>>&, bool, std::string_view);

FRACSEP_INSTANTIATE(Rational)
FRACSEP_INSTANTIATE(double)

#undef FRACSEP_INSTANTIATE

}  // namespace fracsep

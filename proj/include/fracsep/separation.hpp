#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "fracsep/attractor.hpp"
#include "fracsep/ifs.hpp"

namespace fracsep {

enum class Verdict { Pass, Fail, Undetermined };

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Undetermined: return "undetermined";
  }
  return "unknown";
}

/// Points of K that are members by construction: images of hull endpoints
/// (which are fixed points of member maps) under finite compositions.
template <Scalar T>
class TestPoints {
 public:
  static TestPoints hull_endpoints(const Ifs<T>& ifs);
  /// f_w(L) for each word.
  static TestPoints from_words(const Ifs<T>& ifs, const std::vector<Word>& words);
  /// f_α(L) for α in the cut at spacing/diam(hull): every point of K lies
  /// within `spacing` of some member.
  static TestPoints net(const Ifs<T>& ifs, const T& spacing, std::size_t word_budget = kDefaultWordBudget);
  /// Accepts each value only if it is shown to be f_w(L) or f_w(R) for some
  /// word of length <= max_depth; throws Domain otherwise.
  static TestPoints certify(const Ifs<T>& ifs, const std::vector<T>& values, int max_depth = 64);

  const std::vector<T>& points() const noexcept { return pts_; }
  std::size_t size() const noexcept { return pts_.size(); }

 private:
  explicit TestPoints(std::vector<T> pts);
  std::vector<T> pts_;
};

template <Scalar T>
struct SeparationReport {
  std::string checker;
  T b{};
  std::size_t wordCount = 0;
  std::size_t classCount = 0;
  /// Minimal gap over pairs of distinct classes (maps for wsp); empty if no pair exists.
  std::optional<T> gap;
  /// gap / b for the difference checkers; the raw sup-norm for wsp.
  std::optional<T> epsStar;
  std::string witnessA;
  std::string witnessB;
  std::optional<T> threshold;
  Verdict verdict = Verdict::Pass;
  /// Pairs left undetermined by the class-equality escalation.
  std::size_t undeterminedPairs = 0;
  /// wsd-hausdorff only: bound on how far the refined-cover distance can sit
  /// from the true set distance, in the same units as epsStar.
  std::optional<T> refinementError;
};

enum class PairSearch { Auto, BruteForce, Sweep };

template <Scalar T>
struct SeparationOptions {
  std::optional<T> threshold;
  std::size_t wordBudget = kDefaultWordBudget;
  int mergeDepthBudget = 6;
  PairSearch search = PairSearch::Auto;
};

/// Below this many candidate points Auto uses brute force.
inline constexpr std::size_t kBruteForceLimit = 10000;

/// max(|h(L) - L|, |h(R) - R|) for h(x) = slope·x + offset: the sup of
/// |h(x) - x| over any compact set whose extreme points are L and R.
template <Scalar T>
T sup_deviation(const T& slope, const T& offset, const Interval<T>& hull) {
  T a = abs(slope * hull.lo + offset - hull.lo);
  T b = abs(slope * hull.hi + offset - hull.hi);
  return a < b ? b : a;
}

template <Scalar T>
SeparationReport<T> wsp_min_separation(const Ifs<T>& ifs, const T& b, const SeparationOptions<T>& opts = {});

template <Scalar T>
SeparationReport<T> wsd_report(const Ifs<T>& ifs, const T& b, const TestPoints<T>& pts,
                               const SeparationOptions<T>& opts = {});

template <Scalar T>
SeparationReport<T> wsd_hausdorff_report(const Ifs<T>& ifs, const T& b, int depth,
                                         const SeparationOptions<T>& opts = {});

enum class Checker { Wsp, Wsd, WsdHausdorff };

template <Scalar T>
struct ScanResult {
  std::vector<SeparationReport<T>> reports;
  bool aborted = false;
  std::string abortMessage;
};

/// One report per scale, in input order. bList must be strictly decreasing
/// inside (0,1). A budget error at some scale keeps the reports of the
/// scales before it and sets `aborted`.
template <Scalar T>
ScanResult<T> scan_scales(const Ifs<T>& ifs, const std::vector<T>& bList, Checker checker, const TestPoints<T>& pts,
                          const SeparationOptions<T>& opts = {}, int hausdorff_depth = 0, unsigned threads = 1);

/// RFC-4180 field quoting.
std::string csv_field(std::string_view s);

template <Scalar T>
void write_reports_csv(std::ostream& os, const std::vector<SeparationReport<T>>& reports, bool header = true,
                       std::string_view series = {});

}  // namespace fracsep

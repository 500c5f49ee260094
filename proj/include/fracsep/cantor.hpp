#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracsep/ifs.hpp"
#include "fracsep/rational.hpp"

namespace fracsep {

/// Middle-λ Cantor system {λx, λx + (1 - λ)}; λ must lie in (0, 1/2).
template <Scalar T>
Ifs<T> make_symmetric(const T& lambda);

/// {c1·x, c2·x + (1 - c2)}; throws Overlap if c1 + c2 >= 1.
template <Scalar T>
Ifs<T> make_asymmetric(const T& c1, const T& c2);

struct CommonBase {
  Rational c;
  int p1 = 0;
  int p2 = 0;
};

struct AsymmetricParams {
  Rational c1;
  Rational c2;
  std::optional<CommonBase> commonBase;
  /// c^{p1} < c^{p2} < 1/4.
  bool theoremEligible = false;
  /// The weaker hypothesis: c^{p1} < 1/4 and c^{p2} < 1/3. Exposed, not proven.
  bool relaxedEligible = false;
};

/// c1 = c^{p1}, c2 = c^{p2} with p1 > p2 >= 1 (so c1 is the smaller ratio).
AsymmetricParams common_base(const Rational& c, int p1, int p2);

struct CoeffVector {
  std::vector<Rational> coeffs;
  Rational base;

  /// Σ coeffs[i]·base^i.
  Rational value() const;
};

struct BlockCoeffMatrix {
  std::vector<std::vector<Rational>> a;
  Rational c;
  int p1 = 0;
  int p2 = 0;

  /// Σ_j a[i][j]·c^{p2·j}.
  Rational block_value(std::size_t i) const;
  /// (1 - c^{p2})·Σ_i c^{p1·i}·block_value(i).
  Rational value() const;
};

/// Rewrites Σ a_i λ^i with every a_i an integer in {-2..2} into an equal sum
/// whose coefficients all share the sign of the value, borrowing from the
/// deepest index upward. Zero value gives the zero vector.
/// Throws Precondition if λ >= 1/3.
CoeffVector rewrite_sign_uniform(const CoeffVector& v);

/// Two-level version: blocks are rewritten in base c^{p1}, each block's
/// inner row in base c^{p2}. Requires c^{p1} < 1/4 and c^{p2} < 1/4 unless
/// `relaxed` (then c^{p1} < 1/4 and c^{p2} < 1/3).
BlockCoeffMatrix rewrite_two_level(const BlockCoeffMatrix& m, bool relaxed = false);

/// Smallest lower bound on every nonzero entry's magnitude produced by
/// rewrite_sign_uniform in base λ: min(1, 1/λ - 3). An untouched entry can be
/// 1, which is below 1/λ - 3 once λ < 1/4.
Rational attainable_coefficient_floor(const Rational& lambda);

/// (1 - λ)(1/λ - 3); Precondition unless 0 < λ < 1/3.
Rational symmetric_eps_bound(const Rational& lambda);

/// min(c^{p2}(1 - c), (1 - c^{p2})(1/c^{p2} - 3)); Precondition unless eligible.
Rational asymmetric_eps_bound(const Rational& c, int p1, int p2);

/// log φ / (p·log(1/c)) with φ = 2/(√5 - 1): the similarity dimension of
/// {c^p x, c^{2p} x + 1 - c^{2p}}.
double closed_form_golden_dim(double c, int p);

/// min over nonzero a ∈ {-2..2}^length of |Σ a_i λ^i|, exact.
Rational exhaustive_min_gap(const Rational& lambda, int length, unsigned threads = 1);

/// "[1,-2,0]" -> integers.
std::vector<int> parse_int_list(std::string_view text);
/// "[[1,-2],[0,1]]" -> rows.
std::vector<std::vector<int>> parse_int_matrix(std::string_view text);

std::string format_coeffs(const std::vector<Rational>& coeffs);

}  // namespace fracsep

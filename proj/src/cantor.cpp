#include "fracsep/cantor.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include "fracsep/error.hpp"
#include "fracsep/parallel.hpp"

namespace fracsep {
namespace {

void require_unit_open(const Rational& x, std::string_view what) {
  if (!(Rational(0) < x && x < Rational(1))) fail(ErrorKind::Domain, std::string(what) + " = " + x.str() + " outside (0,1)");
}

/// Sign-uniform rewrite of a nonnegative-valued sum. Entries above index 0
/// must lie in [-2, 2]; entry 0 may be any rational and absorbs the last carry.
std::vector<Rational> rewrite_positive(std::vector<Rational> a, const Rational& base) {
  const Rational inv = base.reciprocal();
  int carry = 0;
  for (std::size_t i = a.size(); i-- > 1;) {
    Rational t = a[i] - Rational(carry);
    if (t.sign() >= 0) {
      a[i] = t;
      carry = 0;
    } else {
      // a_i λ^i = (1/λ + a_i) λ^i - λ^{i-1}
      a[i] = inv + t;
      carry = 1;
    }
  }
  if (!a.empty()) a[0] = a[0] - Rational(carry);
  return a;
}

std::vector<Rational> negated(std::vector<Rational> a) {
  for (auto& x : a) x = -x;
  return a;
}

Rational power_sum(const std::vector<Rational>& coeffs, const Rational& base) {
  Rational s(0);
  Rational p(1);
  for (const auto& x : coeffs) {
    s = s + x * p;
    p = p * base;
  }
  return s;
}

void require_small_integers(const std::vector<Rational>& coeffs) {
  for (const auto& x : coeffs) {
    if (!x.is_integer() || x < Rational(-2) || Rational(2) < x) {
      fail(ErrorKind::Domain, "coefficient " + x.str() + " is not an integer in {-2..2}");
    }
  }
}

}  // namespace

template <Scalar T>
Ifs<T> make_symmetric(const T& lambda) {
  if (!(T(0) < lambda && lambda < T(1) / T(2))) {
    fail(ErrorKind::Domain, "lambda = " + format_scalar(lambda) + " outside (0,1/2)");
  }
  return Ifs<T>({{lambda, 1, T(0)}, {lambda, 1, T(1) - lambda}});
}

template <Scalar T>
Ifs<T> make_asymmetric(const T& c1, const T& c2) {
  for (const T* c : {&c1, &c2}) {
    if (!(T(0) < *c && *c < T(1))) fail(ErrorKind::Domain, "ratio " + format_scalar(*c) + " outside (0,1)");
  }
  if (!(c1 + c2 < T(1))) {
    fail(ErrorKind::Overlap, "c1 + c2 = " + format_scalar(c1 + c2) + " must be below 1 for disjoint first-level pieces");
  }
  return Ifs<T>({{c1, 1, T(0)}, {c2, 1, T(1) - c2}});
}

AsymmetricParams common_base(const Rational& c, int p1, int p2) {
  require_unit_open(c, "common base c");
  if (p2 < 1) fail(ErrorKind::Domain, "exponent p2 must be at least 1");
  if (p1 <= p2) {
    fail(ErrorKind::Ordering, "common base needs p1 > p2, got p1 = " + std::to_string(p1) + ", p2 = " + std::to_string(p2));
  }
  AsymmetricParams out;
  out.c1 = pow(c, p1);
  out.c2 = pow(c, p2);
  out.commonBase = CommonBase{c, p1, p2};
  const Rational quarter(1, 4);
  out.theoremEligible = out.c1 < out.c2 && out.c2 < quarter;
  out.relaxedEligible = out.c1 < quarter && out.c2 < Rational(1, 3);
  return out;
}

Rational CoeffVector::value() const { return power_sum(coeffs, base); }

Rational BlockCoeffMatrix::block_value(std::size_t i) const { return power_sum(a.at(i), pow(c, p2)); }

Rational BlockCoeffMatrix::value() const {
  const Rational mu = pow(c, p1);
  Rational s(0);
  Rational p(1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    s = s + block_value(i) * p;
    p = p * mu;
  }
  return (Rational(1) - pow(c, p2)) * s;
}

CoeffVector rewrite_sign_uniform(const CoeffVector& v) {
  require_unit_open(v.base, "base lambda");
  if (!(v.base < Rational(1, 3))) {
    fail(ErrorKind::Precondition, "sign-uniform rewriting needs lambda < 1/3, got " + v.base.str());
  }
  require_small_integers(v.coeffs);
  const Rational value = v.value();
  CoeffVector out{std::vector<Rational>(v.coeffs.size(), Rational(0)), v.base};
  if (value.sign() > 0) out.coeffs = rewrite_positive(v.coeffs, v.base);
  if (value.sign() < 0) out.coeffs = negated(rewrite_positive(negated(v.coeffs), v.base));
  return out;
}

namespace {

std::vector<std::vector<Rational>> rewrite_blocks_positive(const BlockCoeffMatrix& m) {
  const Rational mu = pow(m.c, m.p1);
  const Rational nu = pow(m.c, m.p2);
  const Rational inv_mu = mu.reciprocal();
  const std::size_t n1 = m.a.size();
  std::vector<std::vector<Rational>> out(n1);

  // The outer borrow works on block values; whatever it adds to block i
  // (1/μ for a borrow, -1 for repaying one) goes into that row's entry 0,
  // after which the row is made sign-uniform in base ν.
  auto finish_row = [&](std::size_t i, const Rational& adjust) {
    std::vector<Rational> row = m.a[i];
    if (row.empty()) row.push_back(Rational(0));
    row[0] = row[0] + adjust;
    const Rational block = power_sum(row, nu);
    if (block.sign() == 0) {
      out[i].assign(row.size(), Rational(0));
    } else if (block.sign() > 0) {
      out[i] = rewrite_positive(std::move(row), nu);
    } else {
      out[i] = negated(rewrite_positive(negated(std::move(row)), nu));
    }
  };

  int carry = 0;
  for (std::size_t i = n1; i-- > 1;) {
    const Rational t = m.block_value(i) - Rational(carry);
    if (t.sign() >= 0) {
      finish_row(i, Rational(-carry));
      carry = 0;
    } else {
      finish_row(i, inv_mu - Rational(carry));
      carry = 1;
    }
  }
  if (n1 > 0) finish_row(0, Rational(-carry));
  return out;
}

}  // namespace

BlockCoeffMatrix rewrite_two_level(const BlockCoeffMatrix& m, bool relaxed) {
  require_unit_open(m.c, "common base c");
  if (m.p1 <= m.p2) fail(ErrorKind::Ordering, "two-level rewriting needs p1 > p2");
  if (m.p2 < 1) fail(ErrorKind::Domain, "exponent p2 must be at least 1");
  const AsymmetricParams params = common_base(m.c, m.p1, m.p2);
  if (!(relaxed ? params.relaxedEligible : params.theoremEligible)) {
    fail(ErrorKind::Precondition, relaxed ? "two-level rewriting (relaxed) needs c^p1 < 1/4 and c^p2 < 1/3"
                                          : "two-level rewriting needs c^p1 < c^p2 < 1/4");
  }
  for (const auto& row : m.a) require_small_integers(row);

  const Rational value = m.value();
  BlockCoeffMatrix out = m;
  if (value.sign() == 0) {
    for (auto& row : out.a) std::fill(row.begin(), row.end(), Rational(0));
    return out;
  }
  if (value.sign() > 0) {
    out.a = rewrite_blocks_positive(m);
    return out;
  }
  BlockCoeffMatrix flipped = m;
  for (auto& row : flipped.a) row = negated(row);
  out.a = rewrite_blocks_positive(flipped);
  for (auto& row : out.a) row = negated(row);
  return out;
}

Rational attainable_coefficient_floor(const Rational& lambda) {
  Rational f = lambda.reciprocal() - Rational(3);
  return f < Rational(1) ? f : Rational(1);
}

Rational symmetric_eps_bound(const Rational& lambda) {
  require_unit_open(lambda, "lambda");
  if (!(lambda < Rational(1, 3))) {
    fail(ErrorKind::Precondition, "symmetric bound needs lambda < 1/3, got " + lambda.str());
  }
  return (Rational(1) - lambda) * (lambda.reciprocal() - Rational(3));
}

Rational asymmetric_eps_bound(const Rational& c, int p1, int p2) {
  const AsymmetricParams params = common_base(c, p1, p2);
  if (!params.theoremEligible) fail(ErrorKind::Precondition, "asymmetric bound needs c^p1 < c^p2 < 1/4");
  const Rational nu = params.c2;
  Rational ratio_case = nu * (Rational(1) - c);
  Rational digit_case = (Rational(1) - nu) * (nu.reciprocal() - Rational(3));
  return ratio_case < digit_case ? ratio_case : digit_case;
}

double closed_form_golden_dim(double c, int p) {
  if (!(c > 0.0 && c < 1.0)) fail(ErrorKind::Domain, "c outside (0,1)");
  if (p < 1) fail(ErrorKind::Domain, "p must be at least 1");
  const double phi = 2.0 / (std::sqrt(5.0) - 1.0);
  return std::log(phi) / (p * std::log(1.0 / c));
}

Rational exhaustive_min_gap(const Rational& lambda, int length, unsigned threads) {
  require_unit_open(lambda, "lambda");
  if (length < 1 || length > 20) fail(ErrorKind::Domain, "length must be in 1..20");
  // Σ a_i (p/q)^i = Σ a_i p^i q^{k-1-i} / q^{k-1}: work on the integer numerator.
  const std::int64_t p = lambda.num();
  const std::int64_t q = lambda.den();
  std::vector<__int128> weight(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) {
    __int128 w = 1;
    for (int e = 0; e < i; ++e) w *= p;
    for (int e = 0; e < length - 1 - i; ++e) w *= q;
    weight[static_cast<std::size_t>(i)] = w;
  }
  // Split on the first coefficient; the rest is a full odometer.
  std::vector<__int128> best(5, std::numeric_limits<__int128>::max());
  parallel_for(5, threads, [&](std::size_t head) {
    std::vector<int> a(static_cast<std::size_t>(length), -2);
    a[0] = static_cast<int>(head) - 2;
    __int128 local = std::numeric_limits<__int128>::max();
    while (true) {
      __int128 s = 0;
      for (int i = 0; i < length; ++i) s += a[static_cast<std::size_t>(i)] * weight[static_cast<std::size_t>(i)];
      if (s < 0) s = -s;
      if (s != 0 && s < local) local = s;
      int i = 1;
      while (i < length && a[static_cast<std::size_t>(i)] == 2) a[static_cast<std::size_t>(i++)] = -2;
      if (i == length) break;
      ++a[static_cast<std::size_t>(i)];
    }
    best[head] = local;
  });
  __int128 m = *std::min_element(best.begin(), best.end());
  if (m == std::numeric_limits<__int128>::max()) fail(ErrorKind::Domain, "no nonzero combination");
  __int128 den = 1;
  for (int e = 0; e < length - 1; ++e) den *= q;
  if (m > std::numeric_limits<std::int64_t>::max() || den > std::numeric_limits<std::int64_t>::max()) {
    fail(ErrorKind::Overflow, "exhaustive gap does not fit in 64 bits");
  }
  return Rational(static_cast<std::int64_t>(m), static_cast<std::int64_t>(den));
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view strip_brackets(std::string_view s, std::string_view what) {
  s = trim(s);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') {
    fail(ErrorKind::Parse, std::string(what) + " must be bracketed, got \"" + std::string(s) + "\"");
  }
  return s.substr(1, s.size() - 2);
}

}  // namespace

std::vector<int> parse_int_list(std::string_view text) {
  std::string_view body = trim(strip_brackets(text, "integer list"));
  std::vector<int> out;
  if (body.empty()) return out;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = body.find(',', start);
    std::string item(trim(body.substr(start, comma == std::string_view::npos ? body.npos : comma - start)));
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      fail(ErrorKind::Parse, "malformed integer \"" + item + "\"");
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<std::vector<int>> parse_int_matrix(std::string_view text) {
  std::string_view body = trim(strip_brackets(text, "integer matrix"));
  std::vector<std::vector<int>> rows;
  std::size_t pos = 0;
  while (pos < body.size()) {
    std::size_t open = body.find('[', pos);
    if (open == std::string_view::npos) {
      if (!trim(body.substr(pos)).empty()) fail(ErrorKind::Parse, "stray text in integer matrix");
      break;
    }
    std::size_t close = body.find(']', open);
    if (close == std::string_view::npos) fail(ErrorKind::Parse, "unterminated row in integer matrix");
    rows.push_back(parse_int_list(body.substr(open, close - open + 1)));
    pos = close + 1;
  }
  return rows;
}

std::string format_coeffs(const std::vector<Rational>& coeffs) {
  std::string out = "[";
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i) out += ',';
    out += coeffs[i].is_integer() ? std::to_string(coeffs[i].num()) : coeffs[i].str();
  }
  return out + "]";
}

template Ifs<Rational> make_symmetric<Rational>(const Rational&);
template Ifs<double> make_symmetric<double>(const double&);
template Ifs<Rational> make_asymmetric<Rational>(const Rational&, const Rational&);
template Ifs<double> make_asymmetric<double>(const double&, const double&);

}  // namespace fracsep

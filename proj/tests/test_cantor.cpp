#include <doctest.h>

#include <cmath>
#include <functional>
#include <optional>
#include <tuple>

#include "fracsep/cantor.hpp"
#include "fracsep/dimension.hpp"
#include "fracsep/error.hpp"
#include "support.hpp"

using namespace fracsep;
using fracsep::testing::horner_free_value;
using fracsep::testing::Rng;
using Q = Rational;

namespace {

Q R(std::int64_t n, std::int64_t d = 1) { return Q(n, d); }

std::vector<Q> ints(std::initializer_list<int> v) {
  std::vector<Q> out;
  for (int x : v) out.push_back(R(x));
  return out;
}

std::vector<Q> random_coeffs(Rng& rng, std::size_t max_len) {
  std::vector<Q> out(static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(max_len))));
  for (auto& x : out) x = R(rng.between(-2, 2));
  return out;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::Usage;
}

int sign_of(const Q& x) { return x.sign(); }

}  // namespace

TEST_CASE("symmetric and asymmetric constructors") {
  auto third = make_symmetric<Q>(R(1, 3));
  CHECK(third.map(1).ratio == R(1, 3));
  CHECK(third.map(1).translation == R(0));
  CHECK(third.map(2).translation == R(2, 3));
  CHECK(make_symmetric<Q>(R(1, 4)).map(2).translation == R(3, 4));
  CHECK(third.hull() == Interval<Q>{R(0), R(1)});
  CHECK(kind_of([] { make_symmetric<Q>(R(1, 2)); }) == ErrorKind::Domain);
  CHECK(kind_of([] { make_symmetric<Q>(R(0)); }) == ErrorKind::Domain);

  auto asym = make_asymmetric<Q>(R(1, 9), R(1, 3));
  CHECK(asym.map(1).ratio == R(1, 9));
  CHECK(asym.map(2).translation == R(2, 3));
  CHECK(asym.hull() == Interval<Q>{R(0), R(1)});
  CHECK(kind_of([] { make_asymmetric<Q>(R(1, 2), R(1, 2)); }) == ErrorKind::Overlap);
  CHECK(kind_of([] { make_asymmetric<Q>(R(3, 2), R(1, 5)); }) == ErrorKind::Domain);
}

TEST_CASE("common base reduction") {
  auto p = common_base(R(1, 5), 2, 1);
  CHECK(p.c1 == R(1, 25));
  CHECK(p.c2 == R(1, 5));
  CHECK(p.theoremEligible);
  CHECK(p.commonBase->p1 == 2);
  CHECK_FALSE(common_base(R(1, 2), 3, 2).theoremEligible);
  CHECK(common_base(R(1, 2), 3, 2).c2 == R(1, 4));
  CHECK_FALSE(common_base(R(1, 3), 2, 1).theoremEligible);
  CHECK(common_base(R(1, 3), 2, 1).relaxedEligible == false);
  CHECK(kind_of([] { common_base(R(1, 5), 1, 1); }) == ErrorKind::Ordering);
  CHECK(kind_of([] { common_base(R(1, 5), 1, 2); }) == ErrorKind::Ordering);
  CHECK(kind_of([] { common_base(R(2), 2, 1); }) == ErrorKind::Domain);
}

TEST_CASE("sign-uniform rewrite examples") {
  auto a = rewrite_sign_uniform({ints({1, -2}), R(1, 4)});
  CHECK(a.coeffs == ints({0, 2}));
  auto b = rewrite_sign_uniform({ints({-1, 1}), R(1, 4)});
  CHECK(b.coeffs == ints({0, -3}));
  auto c = rewrite_sign_uniform({ints({2, 0, 1}), R(1, 5)});
  CHECK(c.coeffs == ints({2, 0, 1}));
  auto z = rewrite_sign_uniform({ints({0, 0, 0}), R(1, 4)});
  CHECK(z.value() == R(0));
  for (const auto& x : z.coeffs) CHECK(x == R(0));
  CHECK(kind_of([] { rewrite_sign_uniform({ints({1}), R(1, 3)}); }) == ErrorKind::Precondition);
  CHECK(kind_of([] { rewrite_sign_uniform({ints({3}), R(1, 4)}); }) == ErrorKind::Domain);
}

TEST_CASE("sign-uniform rewrite preserves value and sign") {
  Rng rng(44);
  for (Q lambda : {R(1, 4), R(1, 5), R(2, 7)}) {
    const Q floor = attainable_coefficient_floor(lambda);
    for (int t = 0; t < 3000; ++t) {
      CoeffVector v{random_coeffs(rng, 12), lambda};
      auto w = rewrite_sign_uniform(v);
      const Q value = horner_free_value(v.coeffs, lambda);
      REQUIRE(w.coeffs.size() == v.coeffs.size());
      CHECK(horner_free_value(w.coeffs, lambda) == value);
      bool uniform = true;
      bool above = true;
      for (const auto& x : w.coeffs) {
        if (x.sign() != 0 && x.sign() != value.sign()) uniform = false;
        if (x.sign() != 0 && abs(x) < floor) above = false;
      }
      CHECK(uniform);
      CHECK(above);
    }
  }
}

TEST_CASE("coefficient floor: 1/lambda - 3 holds for lambda >= 1/4 only") {
  CHECK(attainable_coefficient_floor(R(1, 4)) == R(1));
  CHECK(attainable_coefficient_floor(R(2, 7)) == R(1, 2));
  CHECK(attainable_coefficient_floor(R(1, 5)) == R(1));
  // An untouched coefficient 1 stays 1, below 1/lambda - 3 = 2.
  auto w = rewrite_sign_uniform({ints({1, 0}), R(1, 5)});
  CHECK(w.coeffs == ints({1, 0}));
  CHECK(w.coeffs[0] < R(1, 1) / R(1, 5) - R(3));
}

TEST_CASE("two-level rewrite preserves value and keeps rows sign-uniform") {
  Rng rng(9);
  const std::vector<std::tuple<Q, int, int>> bases{{R(1, 5), 2, 1}, {R(1, 5), 3, 1}, {R(1, 2), 5, 3}};
  for (const auto& [c, p1, p2] : bases) {
    for (int t = 0; t < 300; ++t) {
      BlockCoeffMatrix m;
      m.c = c;
      m.p1 = p1;
      m.p2 = p2;
      const auto n1 = rng.between(1, 5);
      const auto n2 = static_cast<std::size_t>(rng.between(1, 5));
      for (int i = 0; i < n1; ++i) {
        std::vector<Q> row(n2);
        for (auto& x : row) x = R(rng.between(-2, 2));
        m.a.push_back(row);
      }
      auto w = rewrite_two_level(m);
      CHECK(w.value() == m.value());
      const Q nu = pow(c, p2);
      for (std::size_t i = 0; i < w.a.size(); ++i) {
        const int s = sign_of(horner_free_value(w.a[i], nu));
        bool uniform = true;
        for (const auto& x : w.a[i]) uniform = uniform && (x.sign() == 0 || x.sign() == s);
        CHECK(uniform);
      }
    }
  }
}

TEST_CASE("two-level rewrite: nonnegative input is unchanged and eligibility is enforced") {
  BlockCoeffMatrix m{{ints({1, 0, 2}), ints({0, 1, 1})}, R(1, 5), 2, 1};
  CHECK(rewrite_two_level(m).a == m.a);
  BlockCoeffMatrix bad{{ints({1})}, R(1, 3), 2, 1};
  CHECK(kind_of([&] { rewrite_two_level(bad); }) == ErrorKind::Precondition);
  BlockCoeffMatrix order{{ints({1})}, R(1, 5), 1, 2};
  CHECK(kind_of([&] { rewrite_two_level(order); }) == ErrorKind::Ordering);
  // A single negative block comes back with every entry <= 0.
  BlockCoeffMatrix one{{ints({-1, 2, 2})}, R(1, 5), 2, 1};
  REQUIRE(one.value() < R(0));
  auto w = rewrite_two_level(one);
  CHECK(w.value() == one.value());
  for (const auto& x : w.a[0]) CHECK(x.sign() <= 0);
}

TEST_CASE("literal two-level borrow can leave a block of the wrong sign") {
  // The outer borrow subtracts a carry from A_0 = -1 + 2/5 before negation,
  // i.e. 2/5 after it; a block value in (0,1) minus the carry goes negative.
  BlockCoeffMatrix m{{ints({-1, 2}), ints({1, -2})}, R(1, 5), 2, 1};
  auto w = rewrite_two_level(m);
  CHECK(w.value() == m.value());
  CHECK(w.block_value(0).sign() != w.block_value(1).sign());
}

TEST_CASE("eps bounds") {
  CHECK(symmetric_eps_bound(R(1, 4)) == R(3, 4));
  CHECK(symmetric_eps_bound(R(1, 5)) == R(8, 5));
  CHECK(kind_of([] { symmetric_eps_bound(R(1, 3)); }) == ErrorKind::Precondition);
  CHECK(asymmetric_eps_bound(R(1, 5), 2, 1) == R(4, 25));
  CHECK(kind_of([] { asymmetric_eps_bound(R(1, 3), 2, 1); }) == ErrorKind::Precondition);
}

TEST_CASE("golden dimension closed form") {
  for (double c : {0.2, 0.3, 0.45}) {
    for (int p : {1, 2, 3}) {
      double d = closed_form_golden_dim(c, p);
      double sim = similarity_dimension({std::pow(c, p), std::pow(c, 2 * p)}, 1e-13);
      CHECK(std::abs(d - sim) < 2e-12);
      CHECK(std::abs(closed_form_golden_dim(c, 2 * p) - d / 2) < 1e-15);
    }
  }
  CHECK(std::abs(closed_form_golden_dim(0.2, 1) - 0.29899) < 1e-5);
  const double phi = 2.0 / (std::sqrt(5.0) - 1.0);
  CHECK(std::abs(phi * phi - phi - 1) < 1e-12);
  CHECK(kind_of([] { closed_form_golden_dim(1.0, 1); }) == ErrorKind::Domain);
}

TEST_CASE("exhaustive minimal gap matches a naive enumeration") {
  for (Q lambda : {R(1, 4), R(1, 5), R(2, 7)}) {
    for (int k = 1; k <= 4; ++k) {
      std::optional<Q> best;
      std::vector<int> a(static_cast<std::size_t>(k), -2);
      for (;;) {
        std::vector<Q> coeffs;
        for (int x : a) coeffs.push_back(R(x));
        Q v = abs(horner_free_value(coeffs, lambda));
        if (v.sign() != 0 && (!best || v < *best)) best = v;
        std::size_t i = 0;
        while (i < a.size() && a[i] == 2) a[i++] = -2;
        if (i == a.size()) break;
        ++a[i];
      }
      CHECK(exhaustive_min_gap(lambda, k) == *best);
      CHECK(exhaustive_min_gap(lambda, k, 3) == *best);
      const Q floor = (R(1) - lambda) * attainable_coefficient_floor(lambda) * pow(lambda, k - 1);
      CHECK((R(1) - lambda) * *best >= floor);
      if (lambda >= R(1, 4)) CHECK(floor == symmetric_eps_bound(lambda) * pow(lambda, k - 1));
    }
  }
}

TEST_CASE("coefficient parsing") {
  CHECK(parse_int_list("[1,-2,0]") == std::vector<int>{1, -2, 0});
  CHECK(parse_int_list(" [ 2 ] ") == std::vector<int>{2});
  CHECK(parse_int_matrix("[[1,-2],[0,1]]") == std::vector<std::vector<int>>{{1, -2}, {0, 1}});
  CHECK(kind_of([] { parse_int_list("1,2"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_int_list("[1,x]"); }) == ErrorKind::Parse);
  CHECK(kind_of([] { parse_int_matrix("[[1],2]"); }) == ErrorKind::Parse);
  CHECK(format_coeffs(ints({1, -2})) == "[1,-2]");
}

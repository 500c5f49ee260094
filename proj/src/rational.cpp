#include "fracsep/rational.hpp"

#include <charconv>
#include <limits>
#include <ostream>

#include "fracsep/error.hpp"

namespace fracsep {
namespace {

__extension__ typedef __int128 wide_t;
__extension__ typedef unsigned __int128 uwide_t;

constexpr wide_t kMax64 = std::numeric_limits<std::int64_t>::max();

uwide_t magnitude(wide_t v) { return v < 0 ? uwide_t(0) - uwide_t(v) : uwide_t(v); }

uwide_t gcd_wide(uwide_t a, uwide_t b) {
  while (b != 0) {
    uwide_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Reduces n/d and narrows back to 64 bits. d must be nonzero.
void narrow(wide_t n, wide_t d, std::int64_t& out_n, std::int64_t& out_d) {
  if (d < 0) {
    n = -n;
    d = -d;
  }
  if (n == 0) {
    out_n = 0;
    out_d = 1;
    return;
  }
  uwide_t g = gcd_wide(magnitude(n), uwide_t(d));
  if (g > 1) {
    n /= wide_t(g);
    d /= wide_t(g);
  }
  if (n > kMax64 || n < -kMax64 || d > kMax64) {
    fail(ErrorKind::Overflow, "rational result exceeds 64-bit range");
  }
  out_n = static_cast<std::int64_t>(n);
  out_d = static_cast<std::int64_t>(d);
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    fail(ErrorKind::Parse, "malformed rational '" + std::string(whole) + "'");
  }
  return v;
}

Rational pow10(int e) {
  Rational r(1);
  for (int i = 0; i < e; ++i) r *= Rational(10);
  return r;
}

}  // namespace

Rational::Rational(std::int64_t n, std::int64_t d) {
  if (d == 0) fail(ErrorKind::Domain, "rational with zero denominator");
  narrow(n, d, num_, den_);
}

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s.empty()) fail(ErrorKind::Parse, "empty rational literal");

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    return Rational(parse_int(s.substr(0, slash), text), parse_int(s.substr(slash + 1), text));
  }

  int exponent = 0;
  if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    exponent = static_cast<int>(parse_int(s.substr(e + 1), text));
    s = s.substr(0, e);
  }
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  int fraction_digits = 0;
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
    fraction_digits = static_cast<int>(s.size() - dot - 1);
  } else {
    digits = std::string(s);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
    fail(ErrorKind::Parse, "malformed rational '" + std::string(text) + "'");
  }
  Rational value(parse_int(digits, text));
  int shift = exponent - fraction_digits;
  if (shift > 18 || shift < -18) fail(ErrorKind::Overflow, "decimal exponent out of range in '" + std::string(text) + "'");
  value = shift >= 0 ? value * pow10(shift) : value / pow10(-shift);
  return negative ? -value : value;
}

double Rational::to_double() const noexcept {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

std::string Rational::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

Rational Rational::reciprocal() const {
  if (num_ == 0) fail(ErrorKind::Domain, "reciprocal of zero");
  Rational r;
  narrow(den_, num_, r.num_, r.den_);
  return r;
}

Rational Rational::operator-() const {
  Rational r;
  narrow(-wide_t(num_), den_, r.num_, r.den_);
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  if (den_ == o.den_) {
    narrow(wide_t(num_) + o.num_, den_, num_, den_);
  } else {
    narrow(wide_t(num_) * o.den_ + wide_t(o.num_) * den_, wide_t(den_) * o.den_, num_, den_);
  }
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  if (den_ == o.den_) {
    narrow(wide_t(num_) - o.num_, den_, num_, den_);
  } else {
    narrow(wide_t(num_) * o.den_ - wide_t(o.num_) * den_, wide_t(den_) * o.den_, num_, den_);
  }
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  narrow(wide_t(num_) * o.num_, wide_t(den_) * o.den_, num_, den_);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) fail(ErrorKind::Domain, "division by zero");
  narrow(wide_t(num_) * o.den_, wide_t(den_) * o.num_, num_, den_);
  return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  if (a.den_ == b.den_) return a.num_ <=> b.num_;
  wide_t lhs = wide_t(a.num_) * b.den_;
  wide_t rhs = wide_t(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

Rational pow(const Rational& base, int exponent) {
  if (exponent < 0) return pow(base.reciprocal(), -exponent);
  Rational result(1);
  Rational b = base;
  while (exponent > 0) {
    if (exponent & 1) result *= b;
    exponent >>= 1;
    if (exponent > 0) b *= b;
  }
  return result;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace fracsep

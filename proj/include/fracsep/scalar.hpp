#pragma once

#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdio>
#include <string>
#include <string_view>

#include "fracsep/rational.hpp"

namespace fracsep {

/// The two arithmetic modes. A computation is instantiated for exactly one of
/// them, so modes can never mix inside a run.
template <class T>
concept Scalar = std::same_as<T, Rational> || std::same_as<T, double>;

template <Scalar T>
inline constexpr bool is_exact_v = std::same_as<T, Rational>;

inline double to_double(double x) noexcept { return x; }
inline double to_double(const Rational& x) noexcept { return x.to_double(); }

inline double abs(double x) noexcept { return std::fabs(x); }

template <Scalar T>
T from_rational(const Rational& r) {
  if constexpr (is_exact_v<T>) {
    return r;
  } else {
    return r.to_double();
  }
}

template <Scalar T>
T parse_scalar(std::string_view text) {
  return from_rational<T>(Rational::parse(text));
}

/// Rationals print as "p/q"; doubles with 17 significant digits.
inline std::string format_scalar(const Rational& r) { return r.str(); }
inline std::string format_scalar(double x) {
  // Shortest text that reads back to the same double.
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <Scalar T>
T scalar_pow(const T& base, int exponent) {
  if constexpr (is_exact_v<T>) {
    return pow(base, exponent);
  } else {
    return std::pow(base, exponent);
  }
}

}  // namespace fracsep

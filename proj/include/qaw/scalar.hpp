#pragma once

// Backend-generic scalar layer. Every higher module is written against the
// Scalar concept and instantiated for two backends: machine complex doubles
// and exact Gaussian rationals.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

#include "qaw/error.hpp"
#include "qaw/gaussian_rational.hpp"

namespace qaw {

using Complex = std::complex<double>;
using Exact = GaussianRational;

enum class Backend { Float, Rational };

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Complex> {
  static constexpr bool exact = false;
  static constexpr Backend backend = Backend::Float;
  static bool is_zero(const Complex& x) { return x == Complex{}; }
  static double magnitude(const Complex& x) { return std::abs(x); }
  static Complex inverse(const Complex& x) {
    if (is_zero(x)) throw Error(Errc::DivisionByZero, "reciprocal of zero");
    return 1.0 / x;
  }
  static Complex to_complex(const Complex& x) { return x; }
  /// "re", or "re+im i" / "re-im i", 17 significant digits.
  static std::string format(const Complex& x);
  static Complex parse(std::string_view text);
};

template <>
struct scalar_traits<Exact> {
  static constexpr bool exact = true;
  static constexpr Backend backend = Backend::Rational;
  static bool is_zero(const Exact& x) { return x.is_zero(); }
  static double magnitude(const Exact& x) { return x.magnitude(); }
  static Exact inverse(const Exact& x) { return x.inverse(); }
  static Complex to_complex(const Exact& x) {
    return {x.re().get_d(), x.im().get_d()};
  }
  static std::string format(const Exact& x) { return x.to_string(); }
  static Exact parse(std::string_view text) { return Exact::parse(text); }
};

template <class S>
concept Scalar = requires(const S& a, const S& b) {
  { a + b } -> std::convertible_to<S>;
  { a - b } -> std::convertible_to<S>;
  { a * b } -> std::convertible_to<S>;
  { a / b } -> std::convertible_to<S>;
  { -a } -> std::convertible_to<S>;
  { scalar_traits<S>::is_zero(a) } -> std::same_as<bool>;
  { scalar_traits<S>::magnitude(a) } -> std::same_as<double>;
};

template <Scalar S>
inline bool is_zero(const S& x) {
  return scalar_traits<S>::is_zero(x);
}

template <Scalar S>
inline double magnitude(const S& x) {
  return scalar_traits<S>::magnitude(x);
}

template <Scalar S>
inline S inverse(const S& x) {
  return scalar_traits<S>::inverse(x);
}

template <Scalar S>
inline S divide(const S& a, const S& b) {
  if (is_zero(b)) throw Error(Errc::DivisionByZero, "division by zero");
  return a / b;
}

template <Scalar S>
inline std::string format(const S& x) {
  return scalar_traits<S>::format(x);
}

template <Scalar S>
inline S parse_scalar(std::string_view text) {
  return scalar_traits<S>::parse(text);
}

/// Exact integer power by repeated squaring.
template <Scalar S>
S pow_int(const S& x, std::int64_t k) {
  if (k < 0) {
    if (is_zero(x))
      throw Error(Errc::ZeroToNegativePower, "zero raised to a negative power");
    return pow_int(inverse(x), -k);
  }
  S result(1);
  S base = x;
  auto e = static_cast<std::uint64_t>(k);
  while (e != 0) {
    if (e & 1U) result = result * base;
    e >>= 1U;
    if (e != 0) base = base * base;
  }
  return result;
}

constexpr std::int64_t binom2(std::int64_t n) noexcept { return n * (n - 1) / 2; }

struct Tolerance {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
};

/// Float backend: |x-y| <= rel_tol * max(scale, |x|, |y|) + abs_tol.
/// Rational backend: exact equality; the tolerance is ignored.
template <Scalar S>
bool approx_eq(const S& x, const S& y, double scale, Tolerance tol = {}) {
  if constexpr (scalar_traits<S>::exact) {
    return x == y;
  } else {
    const double bound = tol.rel_tol * std::max({scale, magnitude(x), magnitude(y)}) + tol.abs_tol;
    return magnitude(x - y) <= bound;
  }
}

/// True when one_minus is to be treated as a vanishing factor 1 - x.
/// Rational: exact zero. Float: |1 - x| < pole_eps * max(1, |x|).
template <Scalar S>
bool factor_vanishes(const S& one_minus, const S& x, double pole_eps) {
  if constexpr (scalar_traits<S>::exact) {
    (void)x;
    (void)pole_eps;
    return is_zero(one_minus);
  } else {
    return magnitude(one_minus) < pole_eps * std::max(1.0, magnitude(x));
  }
}

/// The deformation parameter. Invariants: q != 0 and |q| != 1; the float
/// backend requires ||q| - 1| > epsilon_unit.
template <Scalar S>
class QBase {
 public:
  static constexpr double default_epsilon_unit = 1e-8;

  explicit QBase(S q, double epsilon_unit = default_epsilon_unit) : q_(std::move(q)) {
    if (is_zero(q_)) throw Error(Errc::ZeroQ, "q must be nonzero");
    if constexpr (scalar_traits<S>::exact) {
      if (q_.norm() == 1) throw Error(Errc::InvalidQ, "|q| = 1 is excluded");
    } else {
      if (std::abs(magnitude(q_) - 1.0) <= epsilon_unit)
        throw Error(Errc::InvalidQ, "|q| is within epsilon_unit of 1");
    }
    epsilon_unit_ = epsilon_unit;
  }

  const S& value() const noexcept { return q_; }
  double epsilon_unit() const noexcept { return epsilon_unit_; }
  /// Base 1/q; |1/q| != 1 follows from |q| != 1.
  QBase inverted() const { return QBase(inverse(q_), epsilon_unit_); }
  QBase squared() const { return QBase(q_ * q_, epsilon_unit_); }
  S pow(std::int64_t k) const { return pow_int(q_, k); }

 private:
  S q_;
  double epsilon_unit_ = default_epsilon_unit;
};

}  // namespace qaw

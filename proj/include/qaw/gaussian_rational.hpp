#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace qaw {

/// Exact element of Q(i). Arithmetic is closed and canonical (GMP keeps
/// both components in lowest terms), so equality is structural.
class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long v) : re_(v), im_(0) {}  // NOLINT: implicit by design of the field
  GaussianRational(mpq_class re, mpq_class im = 0)
      : re_(std::move(re)), im_(std::move(im)) {}

  static GaussianRational from_ratio(long num, long den, long inum = 0,
                                     long iden = 1);

  const mpq_class& re() const noexcept { return re_; }
  const mpq_class& im() const noexcept { return im_; }

  bool is_zero() const noexcept { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_real() const noexcept { return sgn(im_) == 0; }

  /// |z|^2, exact.
  mpq_class norm() const { return re_ * re_ + im_ * im_; }
  double magnitude() const;
  GaussianRational conj() const { return {re_, -im_}; }
  /// Throws Error(DivisionByZero) on zero.
  GaussianRational inverse() const;

  GaussianRational operator-() const { return {-re_, -im_}; }
  GaussianRational& operator+=(const GaussianRational& o);
  GaussianRational& operator-=(const GaussianRational& o);
  GaussianRational& operator*=(const GaussianRational& o);
  GaussianRational& operator/=(const GaussianRational& o);

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }
  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// Wire format: "p/q", "p/q+r/s i", "r/s i"; integers drop the "/1".
  std::string to_string() const;
  /// Accepts the wire format plus plain integers, "i", "-i" and spaces.
  static GaussianRational parse(std::string_view text);

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

}  // namespace qaw

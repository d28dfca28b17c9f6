#include "qaw/gaussian_rational.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "qaw/error.hpp"
#include "text_util.hpp"

namespace qaw {

GaussianRational GaussianRational::from_ratio(long num, long den, long inum, long iden) {
  if (den == 0 || iden == 0) throw Error(Errc::DivisionByZero, "zero denominator");
  mpq_class re(num, den);
  mpq_class im(inum, iden);
  re.canonicalize();
  im.canonicalize();
  return {re, im};
}

double GaussianRational::magnitude() const {
  return std::hypot(re_.get_d(), im_.get_d());
}

GaussianRational GaussianRational::inverse() const {
  if (is_zero()) throw Error(Errc::DivisionByZero, "reciprocal of zero");
  const mpq_class n = norm();
  return {re_ / n, -im_ / n};
}

GaussianRational& GaussianRational::operator+=(const GaussianRational& o) {
  re_ += o.re_;
  im_ += o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator-=(const GaussianRational& o) {
  re_ -= o.re_;
  im_ -= o.im_;
  return *this;
}

GaussianRational& GaussianRational::operator*=(const GaussianRational& o) {
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ *= o.re_;
    return *this;
  }
  mpq_class re = re_ * o.re_ - im_ * o.im_;
  mpq_class im = re_ * o.im_ + im_ * o.re_;
  re_ = std::move(re);
  im_ = std::move(im);
  return *this;
}

GaussianRational& GaussianRational::operator/=(const GaussianRational& o) {
  if (o.is_zero()) throw Error(Errc::DivisionByZero, "division by zero");
  if (sgn(im_) == 0 && sgn(o.im_) == 0) {
    re_ /= o.re_;
    return *this;
  }
  return *this *= o.inverse();
}

std::string GaussianRational::to_string() const {
  if (sgn(im_) == 0) return re_.get_str();
  std::string out;
  if (sgn(re_) != 0) out = re_.get_str();
  if (sgn(im_) < 0) {
    out += "-";
    out += mpq_class(-im_).get_str();
  } else {
    if (!out.empty()) out += "+";
    out += im_.get_str();
  }
  out += " i";
  return out;
}

namespace {

mpq_class parse_rational(std::string_view tok, std::string_view whole) {
  if (tok.empty()) throw Error(Errc::ParseError, "malformed rational: '" + std::string(whole) + "'");
  std::string s(tok);
  const auto slash = s.find('/');
  auto valid_int = [](std::string_view digits) {
    std::size_t i = 0;
    if (i < digits.size() && (digits[i] == '-' || digits[i] == '+')) ++i;
    if (i == digits.size()) return false;
    for (; i < digits.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(digits[i]))) return false;
    return true;
  };
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    throw Error(Errc::ParseError, "malformed rational: '" + std::string(whole) + "'");
  mpq_class value;
  value.get_num().set_str(num, 10);
  value.get_den().set_str(den, 10);
  if (sgn(value.get_den()) == 0)
    throw Error(Errc::ParseError, "zero denominator in '" + std::string(whole) + "'");
  value.canonicalize();
  return value;
}

}  // namespace

GaussianRational GaussianRational::parse(std::string_view text) {
  const auto parts = detail::split_complex(text);
  mpq_class re = parts.re.empty() ? mpq_class(0) : parse_rational(parts.re, text);
  mpq_class im(0);
  if (parts.has_im) {
    if (parts.im == "+" || parts.im.empty()) im = 1;
    else if (parts.im == "-") im = -1;
    else im = parse_rational(parts.im, text);
  }
  return {re, im};
}

}  // namespace qaw

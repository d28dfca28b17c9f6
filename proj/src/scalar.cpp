#include "qaw/scalar.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "text_util.hpp"

namespace qaw {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::ZeroToNegativePower: return "ZeroToNegativePower";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::InvalidQ: return "InvalidQ";
    case Errc::ZeroBase: return "ZeroBase";
    case Errc::PoleInIdentity: return "PoleInIdentity";
    case Errc::DenominatorPole: return "DenominatorPole";
    case Errc::ZeroQ: return "ZeroQ";
    case Errc::BEqualsOne: return "BEqualsOne";
    case Errc::ZeroParameter: return "ZeroParameter";
    case Errc::NotBalanced: return "NotBalanced";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::PoleGuard: return "PoleGuard";
    case Errc::InvalidIndices: return "InvalidIndices";
    case Errc::NotACor33Record: return "NotACor33Record";
    case Errc::SamplerExhausted: return "SamplerExhausted";
    case Errc::UnknownTarget: return "UnknownTarget";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace detail {

ComplexParts split_complex(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s += c;
  ComplexParts parts;
  if (s.empty()) throw Error(Errc::ParseError, "empty scalar");
  if (s.back() != 'i') {
    parts.re = s;
    return parts;
  }
  s.pop_back();
  if (!s.empty() && s.back() == '*') s.pop_back();
  parts.has_im = true;
  // Last sign not at position 0 and not following an exponent marker.
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) {
    parts.im = s.empty() ? "+" : s;
  } else {
    parts.re = s.substr(0, split);
    parts.im = s.substr(split);
  }
  return parts;
}

}  // namespace detail

std::string scalar_traits<Complex>::format(const Complex& x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x.real());
  std::string out = buf;
  if (x.imag() != 0.0) {
    std::snprintf(buf, sizeof buf, "%+.17g", x.imag());
    out += buf;
    out += " i";
  }
  return out;
}

namespace {

double parse_double(const std::string& tok, std::string_view whole) {
  if (tok == "+" || tok.empty()) return 1.0;
  if (tok == "-") return -1.0;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0' || errno == ERANGE)
    throw Error(Errc::ParseError, "malformed number: '" + std::string(whole) + "'");
  return v;
}

}  // namespace

Complex scalar_traits<Complex>::parse(std::string_view text) {
  const auto parts = detail::split_complex(text);
  // A rational literal is accepted in the float backend too.
  auto real_part = [&](const std::string& tok) {
    if (tok.find('/') != std::string::npos) {
      const auto q = GaussianRational::parse(tok);
      return q.re().get_d();
    }
    return parse_double(tok, text);
  };
  const double re = parts.re.empty() ? 0.0 : real_part(parts.re);
  double im = 0.0;
  if (parts.has_im) {
    if (parts.im == "+" || parts.im == "-") im = parse_double(parts.im, text);
    else im = real_part(parts.im);
  }
  return {re, im};
}

}  // namespace qaw

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qaw {

enum class Errc {
  ZeroToNegativePower,
  DivisionByZero,
  InvalidQ,
  ZeroBase,
  PoleInIdentity,
  DenominatorPole,
  ZeroQ,
  BEqualsOne,
  ZeroParameter,
  NotBalanced,
  ShapeMismatch,
  PoleGuard,
  InvalidIndices,
  NotACor33Record,
  SamplerExhausted,
  UnknownTarget,
  ParseError,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above; the
/// message names the violated constraint where there is one.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace qaw

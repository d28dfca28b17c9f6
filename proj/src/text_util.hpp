#pragma once

#include <string>
#include <string_view>

namespace qaw::detail {

struct ComplexParts {
  std::string re;
  std::string im;  // sign-prefixed coefficient; "+" / "-" for a bare i
  bool has_im = false;
};

/// Splits "re", "re+im i", "re-im i", "im i" (spaces ignored) at the sign
/// that starts the imaginary part. Exponent signs ("1e-5") are not split.
ComplexParts split_complex(std::string_view text);

}  // namespace qaw::detail

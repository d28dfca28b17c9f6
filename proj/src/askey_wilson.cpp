#include "qaw/askey_wilson.hpp"

#include <array>

namespace qaw {

namespace {

constexpr std::array<std::string_view, 7> rep_names = {"PHI_STD", "PHI_INV", "PHI_MIXED", "W_DEF6",
                                                       "W_DEF7",  "W_DEF5",  "W_DEF4"};

}  // namespace

std::string_view rep_tag_name(RepTag tag) noexcept { return rep_names[static_cast<std::size_t>(tag)]; }

std::optional<RepTag> rep_tag_from_name(std::string_view name) noexcept {
  for (std::size_t k = 0; k < rep_names.size(); ++k)
    if (rep_names[k] == name) return static_cast<RepTag>(k);
  return std::nullopt;
}

void RepId::validate() const {
  const std::array<int, 4> roles = {p, r, t, u};
  std::array<bool, 4> seen{};
  for (int k : roles) {
    if (k < 0 || k > 3) throw Error(Errc::InvalidIndices, "role index outside {1,2,3,4}");
    if (seen[k]) throw Error(Errc::InvalidIndices, "roles (p,r,t,u) must be distinct");
    seen[k] = true;
  }
}

std::string RepId::to_string() const {
  std::string out(rep_tag_name(tag));
  out += "(p=" + std::to_string(p + 1);
  if (tag != RepTag::PhiStd && tag != RepTag::PhiInv)
    out += ",r=" + std::to_string(r + 1) + ",t=" + std::to_string(t + 1) + ",u=" + std::to_string(u + 1);
  return out + ")";
}

}  // namespace qaw

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace persistid {

/// Hierarchical NDN data name. Components are arbitrary octet strings.
struct NdnName {
  std::vector<std::string> components;

  friend bool operator==(const NdnName&, const NdnName&) = default;
};

/// Canonical text form: "/" + components joined by "/", each component
/// percent-encoded with lowercase hex. Unreserved characters other than "."
/// stay literal. Throws Errc::EmptyName for a name without components.
std::string escape_ndn_name(const NdnName& name);

/// Inverse of escape_ndn_name; accepts uppercase hex and literal dots.
/// Throws Errc::NotRooted or Errc::BadEscape.
NdnName unescape_ndn_name(std::string_view text);

}  // namespace persistid

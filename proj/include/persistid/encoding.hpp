#pragma once

// Text encodings shared by the magnet, NDN and store modules.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace persistid {

using Bytes = std::vector<std::uint8_t>;

/// RFC 3986 unreserved set: ALPHA / DIGIT / "-" / "." / "_" / "~".
constexpr bool is_unreserved(char c) noexcept {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '-' ||
         c == '.' || c == '_' || c == '~';
}

/// Lowercase hex of the given octets.
std::string to_hex(std::span<const std::uint8_t> octets);

/// Decodes an even-length hex string (either case). Returns nullopt on any
/// non-hex character or odd length.
std::optional<Bytes> from_hex(std::string_view text);

/// RFC 4648 base32 decode (case-insensitive, padding optional).
std::optional<Bytes> from_base32(std::string_view text);

/// Unpadded base64url (RFC 4648 section 5).
std::string to_base64url(std::span<const std::uint8_t> octets);
std::optional<Bytes> from_base64url(std::string_view text);

/// Percent-encodes every octet outside the unreserved set, with lowercase
/// hex digits. `keep` lists extra characters emitted literally.
std::string percent_encode(std::string_view text, std::string_view keep = {});

/// Decodes %XX escapes (either case). With `plus_as_space`, '+' decodes to
/// a space. Returns nullopt on a truncated or non-hex escape.
std::optional<std::string> percent_decode(std::string_view text, bool plus_as_space = false);

/// Number of Unicode code points in a UTF-8 string. Invalid lead/continuation
/// bytes count as one character each.
std::size_t utf8_length(std::string_view text) noexcept;

bool is_valid_utf8(std::string_view text) noexcept;

inline Bytes to_bytes(std::string_view text) { return Bytes(text.begin(), text.end()); }

inline std::string to_string(std::span<const std::uint8_t> octets) {
  return std::string(octets.begin(), octets.end());
}

}  // namespace persistid

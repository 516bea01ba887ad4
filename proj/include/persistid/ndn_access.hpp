#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "persistid/digest.hpp"
#include "persistid/encoding.hpp"
#include "persistid/magnet.hpp"
#include "persistid/ndn_name.hpp"

namespace persistid {

/// NDN access information plus optional verification fields. The signature
/// is carried opaquely; nothing here verifies it.
struct NdnAccessInfo {
  NdnName data_name;
  Sha256Digest content_checksum{};
  /// `signature` and `cert_data_name` are set together or not at all.
  std::optional<Bytes> signature;
  std::optional<NdnName> cert_data_name;

  friend bool operator==(const NdnAccessInfo&, const NdnAccessInfo&) = default;
};

/// Decodes the JSON container:
///   {"data_name": "/a/b", "checksum_sha256": "<64 hex>",
///    "signature": "<base64url>", "cert_data_name": "/keys/x"}
/// Throws Errc::MissingField, BadChecksumLength, OrphanSignature or
/// InvalidContainer (syntax, wrong JSON types, bad names).
NdnAccessInfo parse_ndn_access(std::string_view json_text);

/// Inverse of parse_ndn_access, compact JSON with keys in a fixed order.
std::string serialize_ndn_access(const NdnAccessInfo& info);

/// First xt is urn:ndn, a second urn:ndnsec xt carries the verification
/// fields when present. dn defaults to the last name component.
MagnetLink ndn_to_magnet(const NdnAccessInfo& info);

/// Throws Errc::NoNdnEntry when `link` has no urn:ndn entry.
NdnAccessInfo extract_ndn_from_magnet(const MagnetLink& link);

}  // namespace persistid

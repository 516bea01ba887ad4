#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "persistid/digest.hpp"
#include "persistid/encoding.hpp"
#include "persistid/ndn_name.hpp"

namespace persistid {

namespace xt {

/// BitTorrent infohash (`urn:btih:`).
struct Btih {
  Sha1Digest digest{};
  friend bool operator==(const Btih&, const Btih&) = default;
};

/// Gnutella2 SHA-1 file hash (`urn:sha1:`).
struct Sha1 {
  Sha1Digest digest{};
  friend bool operator==(const Sha1&, const Sha1&) = default;
};

/// Tiger tree root hash (`urn:tree:tiger:`).
struct TigerTree {
  Bytes digest;
  friend bool operator==(const TigerTree&, const TigerTree&) = default;
};

/// Kazaa hash (`urn:kzhash:`).
struct Kzhash {
  Bytes digest;
  friend bool operator==(const Kzhash&, const Kzhash&) = default;
};

/// NDN access: data name plus a SHA-256 checksum (`urn:ndn:`).
struct Ndn {
  NdnName data_name;
  Sha256Digest name_or_content_checksum{};
  friend bool operator==(const Ndn&, const Ndn&) = default;
};

/// NDN verification: content signature plus the data name of the signer's
/// certificate (`urn:ndnsec:`).
struct NdnSec {
  Bytes signature;
  NdnName cert_data_name;
  friend bool operator==(const NdnSec&, const NdnSec&) = default;
};

/// Any other URN namespace, kept as decoded text.
struct Unknown {
  std::string ns;  // lowercase
  std::string payload;
  friend bool operator==(const Unknown&, const Unknown&) = default;
};

}  // namespace xt

using XtEntry = std::variant<xt::Btih, xt::Sha1, xt::TigerTree, xt::Kzhash, xt::Ndn, xt::NdnSec, xt::Unknown>;

struct MagnetLink {
  std::vector<XtEntry> xts;
  std::optional<std::string> display_name;
  std::optional<std::uint64_t> exact_length;
  std::vector<std::string> trackers;
  std::vector<std::string> acceptable_sources;
  std::vector<std::string> keywords;
  /// Unrecognized (key, raw value) pairs, kept exactly as they appeared.
  std::vector<std::pair<std::string, std::string>> unknown_params;

  friend bool operator==(const MagnetLink&, const MagnetLink&) = default;
};

/// Parses one `xt` value as it appears in the URI (still percent-encoded).
/// `urn:` and `uid:` prefixes are both accepted for the NDN namespaces.
/// Unrecognized namespaces yield xt::Unknown. Throws Errc::MalformedXt.
XtEntry parse_xt(std::string_view urn_text);

/// Canonical URI-level text of one `xt` value.
std::string serialize_xt(const XtEntry& entry);

/// Throws Errc::MissingScheme, NoExactTopic, MalformedXt or BadLength.
MagnetLink parse_magnet(std::string_view text);

/// Canonical serialization: xt*, dn, xl, tr*, as*, kt*, then unknown
/// parameters. Throws Errc::InvalidMagnet if `link` breaks an invariant.
std::string serialize_magnet(const MagnetLink& link);

/// Checks the MagnetLink invariants; throws Errc::InvalidMagnet.
void validate(const MagnetLink& link);

}  // namespace persistid

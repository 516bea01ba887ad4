#include "persistid/magnet.hpp"

#include <algorithm>
#include <charconv>

#include "persistid/error.hpp"

namespace persistid {

namespace {

constexpr std::string_view kScheme = "magnet:?";

bool iequals_prefix(std::string_view text, std::string_view prefix) {
  if (text.size() < prefix.size()) return false;
  return std::equal(prefix.begin(), prefix.end(), text.begin(), [](char a, char b) {
    return a == (b >= 'A' && b <= 'Z' ? static_cast<char>(b - 'A' + 'a') : b);
  });
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// URN namespace identifier: letters, digits and hyphens.
bool is_nid(std::string_view text) {
  if (text.empty()) return false;
  return std::all_of(text.begin(), text.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-';
  });
}

bool is_hex(std::string_view text) {
  return std::all_of(text.begin(), text.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
  });
}

[[noreturn]] void malformed(std::string_view what, std::string_view urn) {
  throw Error(Errc::MalformedXt, std::string(what) + ": " + std::string(urn));
}

std::string decode_or(std::string_view raw, std::string_view urn) {
  auto decoded = percent_decode(raw);
  if (!decoded) malformed("bad percent escape", urn);
  return std::move(*decoded);
}

// 40 hex characters or 32 base32 characters.
Sha1Digest parse_sha1_payload(std::string_view raw, std::string_view urn) {
  const auto text = decode_or(raw, urn);
  std::optional<Bytes> octets;
  if (text.size() == 40) {
    octets = from_hex(text);
  } else if (text.size() == 32) {
    octets = from_base32(text);
  }
  if (!octets || octets->size() != 20) malformed("expected a 20-octet digest", urn);
  Sha1Digest digest{};
  std::copy(octets->begin(), octets->end(), digest.begin());
  return digest;
}

Bytes parse_free_digest(std::string_view raw, std::string_view urn, bool allow_base32) {
  const auto text = decode_or(raw, urn);
  std::optional<Bytes> octets;
  if (text.size() % 2 == 0 && is_hex(text)) {
    octets = from_hex(text);
  } else if (allow_base32) {
    octets = from_base32(text);
  }
  if (!octets || octets->empty()) malformed("bad digest", urn);
  return std::move(*octets);
}

NdnName parse_name_payload(std::string_view raw, std::string_view urn) {
  try {
    return unescape_ndn_name(decode_or(raw, urn));
  } catch (const Error& e) {
    if (e.code() == Errc::MalformedXt) throw;
    malformed(e.what(), urn);
  }
}

xt::Ndn parse_ndn_payload(std::string_view raw, std::string_view urn) {
  const auto dot = raw.rfind('.');
  if (dot == std::string_view::npos) malformed("missing '.' before checksum", urn);
  xt::Ndn entry;
  entry.data_name = parse_name_payload(raw.substr(0, dot), urn);
  const auto hex = decode_or(raw.substr(dot + 1), urn);
  const auto checksum = from_hex(hex);
  if (!checksum || checksum->size() != entry.name_or_content_checksum.size()) {
    malformed("checksum must be 64 hex characters", urn);
  }
  std::copy(checksum->begin(), checksum->end(), entry.name_or_content_checksum.begin());
  return entry;
}

xt::NdnSec parse_ndnsec_payload(std::string_view raw, std::string_view urn) {
  // The base64url signature never contains '.', so the first dot delimits.
  const auto dot = raw.find('.');
  if (dot == std::string_view::npos) malformed("missing '.' before certificate name", urn);
  xt::NdnSec entry;
  auto signature = from_base64url(decode_or(raw.substr(0, dot), urn));
  if (!signature) malformed("signature is not base64url", urn);
  entry.signature = std::move(*signature);
  entry.cert_data_name = parse_name_payload(raw.substr(dot + 1), urn);
  return entry;
}

bool is_reserved_unknown(const xt::Unknown& u) {
  if (u.ns == "btih" || u.ns == "sha1" || u.ns == "kzhash" || u.ns == "ndn" || u.ns == "ndnsec") return true;
  return u.ns == "tree" && iequals_prefix(u.payload, "tiger:");
}

std::string encode_name(const NdnName& name) { return percent_encode(escape_ndn_name(name)); }

std::uint64_t parse_length(std::string_view raw) {
  auto text = percent_decode(raw);
  if (!text || text->empty() || !std::all_of(text->begin(), text->end(), [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error(Errc::BadLength, "xl must be a non-negative integer: " + std::string(raw));
  }
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), value);
  if (ec != std::errc{} || ptr != text->data() + text->size()) {
    throw Error(Errc::BadLength, "xl out of range: " + std::string(raw));
  }
  return value;
}

std::string decode_param(std::string_view key, std::string_view raw, bool plus_as_space) {
  auto decoded = percent_decode(raw, plus_as_space);
  if (!decoded) throw Error(Errc::InvalidMagnet, "bad percent escape in '" + std::string(key) + "'");
  return std::move(*decoded);
}

// Returns the xt index for "xt" (0) and "xt.N" (N), nullopt for other keys.
std::optional<std::uint64_t> xt_index(std::string_view key) {
  if (key == "xt") return 0;
  if (key.size() < 4 || key.substr(0, 3) != "xt.") return std::nullopt;
  const auto digits = key.substr(3);
  std::uint64_t n = 0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  return n;
}

}  // namespace

XtEntry parse_xt(std::string_view urn) {
  const bool is_urn = iequals_prefix(urn, "urn:");
  const bool is_uid = iequals_prefix(urn, "uid:");
  if (!is_urn && !is_uid) malformed("expected urn: prefix", urn);
  const auto rest = urn.substr(4);

  const auto colon = rest.find(':');
  const auto token = rest.substr(0, colon);
  if (colon != std::string_view::npos && is_nid(token)) {
    const auto ns = to_lower(token);
    const auto payload = rest.substr(colon + 1);
    if (ns == "ndn") return parse_ndn_payload(payload, urn);
    if (ns == "ndnsec") return parse_ndnsec_payload(payload, urn);
    if (is_uid) malformed("uid: is only defined for the ndn namespaces", urn);
    if (ns == "btih") return xt::Btih{parse_sha1_payload(payload, urn)};
    if (ns == "sha1") return xt::Sha1{parse_sha1_payload(payload, urn)};
    if (ns == "kzhash") return xt::Kzhash{parse_free_digest(payload, urn, false)};
    if (ns == "tree" && iequals_prefix(payload, "tiger:")) {
      return xt::TigerTree{parse_free_digest(payload.substr(6), urn, true)};
    }
    return xt::Unknown{ns, decode_or(payload, urn)};
  }

  // Colon-less form `ndn<DATANAME>.<CHECKSUM>` / `ndnsec<SIGNATURE>.<CERT>`.
  if (iequals_prefix(rest, "ndnsec")) return parse_ndnsec_payload(rest.substr(6), urn);
  if (iequals_prefix(rest, "ndn")) return parse_ndn_payload(rest.substr(3), urn);
  malformed("missing namespace", urn);
}

std::string serialize_xt(const XtEntry& entry) {
  struct Visitor {
    std::string operator()(const xt::Btih& e) const { return "urn:btih:" + to_hex(e.digest); }
    std::string operator()(const xt::Sha1& e) const { return "urn:sha1:" + to_hex(e.digest); }
    std::string operator()(const xt::TigerTree& e) const { return "urn:tree:tiger:" + to_hex(e.digest); }
    std::string operator()(const xt::Kzhash& e) const { return "urn:kzhash:" + to_hex(e.digest); }
    std::string operator()(const xt::Ndn& e) const {
      return "urn:ndn:" + encode_name(e.data_name) + "." + to_hex(e.name_or_content_checksum);
    }
    std::string operator()(const xt::NdnSec& e) const {
      return "urn:ndnsec:" + to_base64url(e.signature) + "." + encode_name(e.cert_data_name);
    }
    std::string operator()(const xt::Unknown& e) const { return "urn:" + e.ns + ":" + percent_encode(e.payload, ":"); }
  };
  return std::visit(Visitor{}, entry);
}

void validate(const MagnetLink& link) {
  if (link.xts.empty()) throw Error(Errc::InvalidMagnet, "at least one xt entry is required");
  for (const auto& entry : link.xts) {
    if (const auto* t = std::get_if<xt::TigerTree>(&entry); t && t->digest.empty()) {
      throw Error(Errc::InvalidMagnet, "empty tiger tree digest");
    }
    if (const auto* k = std::get_if<xt::Kzhash>(&entry); k && k->digest.empty()) {
      throw Error(Errc::InvalidMagnet, "empty kzhash digest");
    }
    if (const auto* n = std::get_if<xt::Ndn>(&entry); n && n->data_name.components.empty()) {
      throw Error(Errc::InvalidMagnet, "empty NDN data name");
    }
    if (const auto* s = std::get_if<xt::NdnSec>(&entry); s && s->cert_data_name.components.empty()) {
      throw Error(Errc::InvalidMagnet, "empty NDN certificate name");
    }
    if (const auto* u = std::get_if<xt::Unknown>(&entry)) {
      if (!is_nid(u->ns) || to_lower(u->ns) != u->ns || is_reserved_unknown(*u)) {
        throw Error(Errc::InvalidMagnet, "invalid namespace for unknown xt: " + u->ns);
      }
    }
  }
  for (const auto& [key, value] : link.unknown_params) {
    const bool key_ok = !key.empty() && key.find_first_of("=&#") == std::string::npos;
    if (!key_ok || value.find_first_of("&#") != std::string::npos) {
      throw Error(Errc::InvalidMagnet, "unknown parameter cannot be serialized: " + key);
    }
    const bool consumed = xt_index(key).has_value() || key == "tr" || key == "as" || key == "kt" ||
                          (key == "dn" && !link.display_name) || (key == "xl" && !link.exact_length);
    if (consumed) throw Error(Errc::InvalidMagnet, "unknown parameter shadows a recognized key: " + key);
  }
}

MagnetLink parse_magnet(std::string_view text) {
  if (!iequals_prefix(text, kScheme)) throw Error(Errc::MissingScheme, "expected 'magnet:?'");
  auto query = text.substr(kScheme.size());
  if (const auto hash = query.find('#'); hash != std::string_view::npos) query = query.substr(0, hash);

  MagnetLink link;
  std::vector<std::pair<std::uint64_t, XtEntry>> topics;
  while (!query.empty()) {
    const auto amp = query.find('&');
    const auto param = query.substr(0, amp);
    query = amp == std::string_view::npos ? std::string_view{} : query.substr(amp + 1);
    if (param.empty()) continue;

    const auto eq = param.find('=');
    const auto key = param.substr(0, eq);
    const auto raw = eq == std::string_view::npos ? std::string_view{} : param.substr(eq + 1);
    if (key.empty()) continue;

    if (const auto index = xt_index(key)) {
      topics.emplace_back(*index, parse_xt(raw));
    } else if (key == "dn" && !link.display_name) {
      link.display_name = decode_param(key, raw, true);
    } else if (key == "xl" && !link.exact_length) {
      link.exact_length = parse_length(raw);
    } else if (key == "tr") {
      link.trackers.push_back(decode_param(key, raw, false));
    } else if (key == "as") {
      link.acceptable_sources.push_back(decode_param(key, raw, false));
    } else if (key == "kt") {
      link.keywords.push_back(decode_param(key, raw, true));
    } else {
      link.unknown_params.emplace_back(std::string(key), std::string(raw));
    }
  }
  if (topics.empty()) throw Error(Errc::NoExactTopic, "magnet link carries no xt parameter");

  // Plain `xt` sorts as index 0; `xt.N` entries follow in index order.
  std::stable_sort(topics.begin(), topics.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  link.xts.reserve(topics.size());
  for (auto& [index, entry] : topics) link.xts.push_back(std::move(entry));
  return link;
}

std::string serialize_magnet(const MagnetLink& link) {
  validate(link);
  std::string out(kScheme);
  bool first = true;
  auto append = [&](std::string_view key, std::string_view value) {
    if (!first) out.push_back('&');
    first = false;
    out.append(key);
    out.push_back('=');
    out.append(value);
  };
  for (const auto& entry : link.xts) append("xt", serialize_xt(entry));
  if (link.display_name) append("dn", percent_encode(*link.display_name));
  if (link.exact_length) append("xl", std::to_string(*link.exact_length));
  for (const auto& tr : link.trackers) append("tr", percent_encode(tr));
  for (const auto& as : link.acceptable_sources) append("as", percent_encode(as));
  for (const auto& kt : link.keywords) append("kt", percent_encode(kt));
  for (const auto& [key, value] : link.unknown_params) append(key, value);
  return out;
}

}  // namespace persistid

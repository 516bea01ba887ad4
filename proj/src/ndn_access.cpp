#include "persistid/ndn_access.hpp"

#include <algorithm>

#include <json.hpp>

#include "persistid/error.hpp"

namespace persistid {

namespace {

using nlohmann::json;

const std::string* string_field(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return nullptr;
  if (!it->is_string()) throw Error(Errc::InvalidContainer, std::string(key) + " must be a string");
  return it->get_ptr<const std::string*>();
}

NdnName name_field(const std::string& text, const char* key) {
  try {
    auto name = unescape_ndn_name(text);
    if (name.components.empty()) throw Error(Errc::EmptyName, "empty");
    return name;
  } catch (const Error& e) {
    throw Error(Errc::InvalidContainer, std::string(key) + ": " + e.what());
  }
}

void check_pairing(const NdnAccessInfo& info) {
  if (info.signature.has_value() != info.cert_data_name.has_value()) {
    throw Error(Errc::OrphanSignature, "signature and cert_data_name must be given together");
  }
}

}  // namespace

NdnAccessInfo parse_ndn_access(std::string_view json_text) {
  const auto doc = json::parse(json_text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw Error(Errc::InvalidContainer, "not a JSON object");

  const auto* data_name = string_field(doc, "data_name");
  if (!data_name) throw Error(Errc::MissingField, "data_name");
  const auto* checksum = string_field(doc, "checksum_sha256");
  if (!checksum) throw Error(Errc::MissingField, "checksum_sha256");

  NdnAccessInfo info;
  info.data_name = name_field(*data_name, "data_name");
  const auto digest = from_hex(*checksum);
  if (!digest) throw Error(Errc::BadChecksumLength, "checksum_sha256 is not hex");
  if (digest->size() != info.content_checksum.size()) {
    throw Error(Errc::BadChecksumLength, "checksum_sha256 must be 64 hex characters, got " +
                                             std::to_string(checksum->size()));
  }
  std::copy(digest->begin(), digest->end(), info.content_checksum.begin());

  if (const auto* signature = string_field(doc, "signature")) {
    auto octets = from_base64url(*signature);
    if (!octets) throw Error(Errc::InvalidContainer, "signature is not base64url");
    info.signature = std::move(*octets);
  }
  if (const auto* cert = string_field(doc, "cert_data_name")) {
    info.cert_data_name = name_field(*cert, "cert_data_name");
  }
  check_pairing(info);
  return info;
}

std::string serialize_ndn_access(const NdnAccessInfo& info) {
  check_pairing(info);
  // ordered_json keeps the documented field order.
  nlohmann::ordered_json doc;
  doc["data_name"] = escape_ndn_name(info.data_name);
  doc["checksum_sha256"] = to_hex(info.content_checksum);
  if (info.signature) {
    doc["signature"] = to_base64url(*info.signature);
    doc["cert_data_name"] = escape_ndn_name(*info.cert_data_name);
  }
  return doc.dump();
}

MagnetLink ndn_to_magnet(const NdnAccessInfo& info) {
  check_pairing(info);
  if (info.data_name.components.empty()) throw Error(Errc::EmptyName, "data_name has no components");
  MagnetLink link;
  link.xts.emplace_back(xt::Ndn{info.data_name, info.content_checksum});
  if (info.signature) link.xts.emplace_back(xt::NdnSec{*info.signature, *info.cert_data_name});
  link.display_name = info.data_name.components.back();
  return link;
}

NdnAccessInfo extract_ndn_from_magnet(const MagnetLink& link) {
  const auto ndn = std::find_if(link.xts.begin(), link.xts.end(),
                                [](const XtEntry& e) { return std::holds_alternative<xt::Ndn>(e); });
  if (ndn == link.xts.end()) throw Error(Errc::NoNdnEntry, "magnet link has no urn:ndn entry");
  const auto& access = std::get<xt::Ndn>(*ndn);

  NdnAccessInfo info;
  info.data_name = access.data_name;
  info.content_checksum = access.name_or_content_checksum;
  const auto sec = std::find_if(link.xts.begin(), link.xts.end(),
                                [](const XtEntry& e) { return std::holds_alternative<xt::NdnSec>(e); });
  if (sec != link.xts.end()) {
    const auto& verification = std::get<xt::NdnSec>(*sec);
    info.signature = verification.signature;
    info.cert_data_name = verification.cert_data_name;
  }
  return info;
}

}  // namespace persistid

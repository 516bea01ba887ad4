#include "persistid/torrent.hpp"

#include <algorithm>

#include "persistid/error.hpp"

namespace persistid {

namespace {


const BencodeEntry& find_info(const BencodeValue& root) {
  if (!root.is_dict()) throw Error(Errc::NoInfoDict, "metainfo is not a dictionary");
  const auto* info = root.find_entry("info");
  if (!info || !info->value.is_dict()) throw Error(Errc::NoInfoDict, "metainfo has no info dictionary");
  return *info;
}

std::uint64_t positive_length(const BencodeValue* value, const char* what) {
  if (!value || !value->is_integer() || value->as_integer() < 0) {
    throw Error(Errc::InvalidTorrent, std::string("missing or negative ") + what);
  }
  return static_cast<std::uint64_t>(value->as_integer());
}

std::uint64_t total_payload(const BencodeValue& info) {
  if (const auto* length = info.find("length")) return positive_length(length, "length");
  const auto* files = info.find("files");
  if (!files || !files->is_list()) throw Error(Errc::InvalidTorrent, "info has neither length nor files");
  std::uint64_t total = 0;
  for (const auto& file : files->as_list()) {
    if (!file.is_dict()) throw Error(Errc::InvalidTorrent, "files entry is not a dictionary");
    total += positive_length(file.find("length"), "file length");
  }
  return total;
}

void add_tracker(std::vector<std::string>& trackers, const BencodeValue& url) {
  if (!url.is_string() || url.as_string().empty()) return;
  if (std::find(trackers.begin(), trackers.end(), url.as_string()) == trackers.end()) {
    trackers.push_back(url.as_string());
  }
}

}  // namespace

Sha1Digest compute_infohash(std::span<const std::uint8_t> source) {
  const auto root = decode_bencode(source);
  const auto span = find_info(root).value_span;
  return sha1(source.subspan(span.offset, span.length));
}

TorrentMetainfo parse_torrent(std::span<const std::uint8_t> source) {
  const auto root = decode_bencode(source);
  const auto& info_entry = find_info(root);
  const auto& info = info_entry.value;

  TorrentMetainfo meta;
  meta.info_span = info_entry.value_span;
  meta.infohash = sha1(source.subspan(meta.info_span.offset, meta.info_span.length));

  const auto* name = info.find("name");
  if (!name || !name->is_string() || name->as_string().empty()) {
    throw Error(Errc::MissingName, "info dictionary has no name");
  }
  meta.name = name->as_string();
  meta.piece_length = positive_length(info.find("piece length"), "piece length");
  meta.total_length = total_payload(info);
  if (meta.total_length == 0) throw Error(Errc::InvalidTorrent, "torrent payload is empty");

  if (const auto* announce = root.find("announce")) add_tracker(meta.trackers, *announce);
  if (const auto* tiers = root.find("announce-list"); tiers && tiers->is_list()) {
    for (const auto& tier : tiers->as_list()) {
      if (!tier.is_list()) continue;
      for (const auto& url : tier.as_list()) add_tracker(meta.trackers, url);
    }
  }
  return meta;
}

MagnetLink torrent_to_magnet(std::span<const std::uint8_t> source, bool include_trackers) {
  auto meta = parse_torrent(source);
  MagnetLink link;
  link.xts.emplace_back(xt::Btih{meta.infohash});
  link.display_name = std::move(meta.name);
  link.exact_length = meta.total_length;
  if (include_trackers) link.trackers = std::move(meta.trackers);
  return link;
}

}  // namespace persistid

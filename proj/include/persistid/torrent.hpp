#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "persistid/bencode.hpp"
#include "persistid/digest.hpp"
#include "persistid/magnet.hpp"

namespace persistid {

/// Access fields extracted from a torrent metainfo file.
struct TorrentMetainfo {
  ByteSpan info_span;  // raw `info` dictionary within the source
  std::string name;
  std::uint64_t total_length = 0;
  std::uint64_t piece_length = 0;
  /// `announce` followed by every `announce-list` tier, duplicates removed.
  std::vector<std::string> trackers;
  Sha1Digest infohash{};
};

/// SHA-1 over the `info` dictionary bytes exactly as they appear in the
/// source. Throws Errc::NoInfoDict plus any decode error.
Sha1Digest compute_infohash(std::span<const std::uint8_t> source);

/// Throws decode errors, Errc::NoInfoDict, MissingName or InvalidTorrent.
TorrentMetainfo parse_torrent(std::span<const std::uint8_t> source);

/// Magnet link with xt=btih, dn=name and xl=total length. Trackers are
/// copied only when `include_trackers` is set.
MagnetLink torrent_to_magnet(std::span<const std::uint8_t> source, bool include_trackers = false);

}  // namespace persistid

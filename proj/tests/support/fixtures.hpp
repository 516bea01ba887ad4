#pragma once

#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "persistid/encoding.hpp"

namespace persistid::testing {

inline std::string fixture_path(const std::string& name) { return std::string(PERSISTID_FIXTURE_DIR) + "/" + name; }

inline Bytes read_fixture(const std::string& name) {
  std::ifstream in(fixture_path(name), std::ios::binary);
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

/// Reference infohashes recorded by the torrent library that wrote the
/// fixtures (see fixtures/make_fixtures.py).
struct ReferenceTorrent {
  std::string file;
  std::string infohash;
  std::uint64_t total_length;
};

inline std::vector<ReferenceTorrent> reference_torrents() {
  std::ifstream in(fixture_path("infohashes.txt"));
  std::vector<ReferenceTorrent> out;
  ReferenceTorrent t;
  while (in >> t.file >> t.infohash >> t.total_length) out.push_back(t);
  return out;
}

// Built by hand; the oracle digest is SHA-1 over the inner `d...e` span,
// computed with sha1sum.
inline Bytes minimal_torrent(bool with_announce = false) {
  std::string s = "d";
  if (with_announce) s += "8:announce27:http://tracker.example/annc";
  s += "4:infod6:lengthi5e4:name1:a12:piece lengthi16384e6:pieces20:";
  s += std::string(20, '\0');
  s += "ee";
  return to_bytes(s);
}

inline constexpr std::string_view kMinimalInfohash = "777b0e126050a4ad440176d56f45a3fdad52a06c";

}  // namespace persistid::testing

#include "persistid/digest.hpp"

#include <openssl/sha.h>

namespace persistid {

Sha1Digest sha1(std::span<const std::uint8_t> data) {
  Sha1Digest out{};
  SHA1(data.data(), data.size(), out.data());
  return out;
}

Sha256Digest sha256(std::span<const std::uint8_t> data) {
  Sha256Digest out{};
  SHA256(data.data(), data.size(), out.data());
  return out;
}

}  // namespace persistid

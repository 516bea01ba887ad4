#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace persistid {

using Sha1Digest = std::array<std::uint8_t, 20>;
using Sha256Digest = std::array<std::uint8_t, 32>;

Sha1Digest sha1(std::span<const std::uint8_t> data);
Sha256Digest sha256(std::span<const std::uint8_t> data);

}  // namespace persistid

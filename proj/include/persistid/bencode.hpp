#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "persistid/encoding.hpp"

namespace persistid {

class BencodeValue;
struct BencodeEntry;

using BencodeList = std::vector<BencodeValue>;
/// Keys strictly ascending by raw bytes.
using BencodeDict = std::vector<BencodeEntry>;

/// Byte range [offset, offset + length) within a decoded source buffer.
struct ByteSpan {
  std::size_t offset = 0;
  std::size_t length = 0;
  friend bool operator==(const ByteSpan&, const ByteSpan&) = default;
};

class BencodeValue {
 public:
  using Storage = std::variant<std::int64_t, std::string, BencodeList, BencodeDict>;

  BencodeValue() : storage_(std::int64_t{0}) {}
  BencodeValue(std::int64_t v) : storage_(v) {}
  BencodeValue(std::string v) : storage_(std::move(v)) {}
  BencodeValue(const char* v) : storage_(std::string(v)) {}
  BencodeValue(BencodeList v) : storage_(std::move(v)) {}
  BencodeValue(BencodeDict v) : storage_(std::move(v)) {}

  [[nodiscard]] bool is_integer() const { return std::holds_alternative<std::int64_t>(storage_); }
  [[nodiscard]] bool is_string() const { return std::holds_alternative<std::string>(storage_); }
  [[nodiscard]] bool is_list() const { return std::holds_alternative<BencodeList>(storage_); }
  [[nodiscard]] bool is_dict() const { return std::holds_alternative<BencodeDict>(storage_); }

  [[nodiscard]] std::int64_t as_integer() const { return std::get<std::int64_t>(storage_); }
  [[nodiscard]] const std::string& as_string() const { return std::get<std::string>(storage_); }
  [[nodiscard]] const BencodeList& as_list() const { return std::get<BencodeList>(storage_); }
  [[nodiscard]] const BencodeDict& as_dict() const { return std::get<BencodeDict>(storage_); }
  [[nodiscard]] BencodeDict& as_dict() { return std::get<BencodeDict>(storage_); }

  /// Dictionary lookup; nullptr when absent or when this is not a dictionary.
  [[nodiscard]] const BencodeValue* find(std::string_view key) const;
  /// Source span of a dictionary value, as recorded by decode_bencode.
  [[nodiscard]] const BencodeEntry* find_entry(std::string_view key) const;

  [[nodiscard]] const Storage& storage() const { return storage_; }

  friend bool operator==(const BencodeValue& a, const BencodeValue& b);

 private:
  Storage storage_;
};

struct BencodeEntry {
  std::string key;
  BencodeValue value;
  /// Where `value` sat in the decoded source; zero for constructed trees.
  ByteSpan value_span;

  /// Spans are bookkeeping and do not take part in equality.
  friend bool operator==(const BencodeEntry& a, const BencodeEntry& b) {
    return a.key == b.key && a.value == b.value;
  }
};

/// Strict decoder: sorted unique dictionary keys, no leading zeros, no
/// trailing bytes. Throws Errc::Truncated, InvalidPrefix, UnsortedKeys,
/// LeadingZeroInteger, BadInteger or TrailingData.
BencodeValue decode_bencode(std::span<const std::uint8_t> octets);

/// Canonical encoding. Dictionary entries must already be sorted.
Bytes encode_bencode(const BencodeValue& value);

}  // namespace persistid

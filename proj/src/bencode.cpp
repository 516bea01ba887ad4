#include "persistid/bencode.hpp"

#include <algorithm>
#include <charconv>

#include "persistid/error.hpp"

namespace persistid {

const BencodeEntry* BencodeValue::find_entry(std::string_view key) const {
  if (!is_dict()) return nullptr;
  const auto& dict = as_dict();
  const auto it = std::lower_bound(dict.begin(), dict.end(), key,
                                   [](const BencodeEntry& e, std::string_view k) { return e.key < k; });
  return it != dict.end() && it->key == key ? &*it : nullptr;
}

const BencodeValue* BencodeValue::find(std::string_view key) const {
  const auto* entry = find_entry(key);
  return entry ? &entry->value : nullptr;
}

bool operator==(const BencodeValue& a, const BencodeValue& b) { return a.storage_ == b.storage_; }

namespace {

constexpr int kMaxDepth = 256;

class Decoder {
 public:
  explicit Decoder(std::span<const std::uint8_t> src) : src_(src) {}

  BencodeValue decode_root() {
    auto value = decode(0);
    if (pos_ != src_.size()) fail(Errc::TrailingData, "bytes after the top-level value");
    return value;
  }

 private:
  [[noreturn]] void fail(Errc code, const std::string& what) const {
    throw Error(code, what + " at offset " + std::to_string(pos_));
  }

  char peek() const {
    if (pos_ >= src_.size()) fail(Errc::Truncated, "unexpected end of input");
    return static_cast<char>(src_[pos_]);
  }

  BencodeValue decode(int depth) {
    if (depth > kMaxDepth) fail(Errc::InvalidPrefix, "nesting too deep");
    const char c = peek();
    if (c == 'i') return decode_integer();
    if (c == 'l') return decode_list(depth);
    if (c == 'd') return decode_dict(depth);
    if (c >= '0' && c <= '9') return decode_string();
    fail(Errc::InvalidPrefix, std::string("unexpected byte '") + c + "'");
  }

  // Reads digits up to `terminator`; returns them without the terminator.
  std::string_view read_digits(char terminator) {
    const std::size_t start = pos_;
    while (peek() != terminator) ++pos_;
    const auto* base = reinterpret_cast<const char*>(src_.data());
    std::string_view digits(base + start, pos_ - start);
    ++pos_;
    return digits;
  }

  BencodeValue decode_integer() {
    ++pos_;  // 'i'
    const std::size_t start = pos_;
    auto digits = read_digits('e');
    const bool negative = !digits.empty() && digits.front() == '-';
    const auto magnitude = negative ? digits.substr(1) : digits;
    if (magnitude.empty() || !std::all_of(magnitude.begin(), magnitude.end(), [](char d) { return d >= '0' && d <= '9'; })) {
      pos_ = start;
      fail(Errc::BadInteger, "malformed integer");
    }
    if (magnitude.size() > 1 && magnitude.front() == '0') {
      pos_ = start;
      fail(Errc::LeadingZeroInteger, "integer with leading zero");
    }
    if (negative && magnitude == "0") {
      pos_ = start;
      fail(Errc::LeadingZeroInteger, "negative zero");
    }
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
      pos_ = start;
      fail(Errc::BadInteger, "integer out of range");
    }
    return value;
  }

  BencodeValue decode_string() {
    const std::size_t start = pos_;
    auto digits = read_digits(':');
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char d) { return d >= '0' && d <= '9'; })) {
      pos_ = start;
      fail(Errc::InvalidPrefix, "malformed string length");
    }
    if (digits.size() > 1 && digits.front() == '0') {
      pos_ = start;
      fail(Errc::LeadingZeroInteger, "string length with leading zero");
    }
    std::size_t length = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), length);
    if (ec != std::errc{} || length > src_.size() - pos_) fail(Errc::Truncated, "string runs past end of input");
    std::string out(reinterpret_cast<const char*>(src_.data()) + pos_, length);
    pos_ += length;
    return out;
  }

  BencodeValue decode_list(int depth) {
    ++pos_;  // 'l'
    BencodeList list;
    while (peek() != 'e') list.push_back(decode(depth + 1));
    ++pos_;
    return list;
  }

  BencodeValue decode_dict(int depth) {
    ++pos_;  // 'd'
    BencodeDict dict;
    while (peek() != 'e') {
      const char c = peek();
      if (c < '0' || c > '9') fail(Errc::InvalidPrefix, "dictionary key must be a byte string");
      const std::size_t key_pos = pos_;
      auto key = decode_string().as_string();
      if (!dict.empty() && !(dict.back().key < key)) {
        pos_ = key_pos;
        fail(Errc::UnsortedKeys, "dictionary keys not strictly ascending");
      }
      const std::size_t value_pos = pos_;
      auto value = decode(depth + 1);
      dict.push_back(BencodeEntry{std::move(key), std::move(value), ByteSpan{value_pos, pos_ - value_pos}});
    }
    ++pos_;
    return dict;
  }

  std::span<const std::uint8_t> src_;
  std::size_t pos_ = 0;
};

void encode_into(const BencodeValue& value, Bytes& out) {
  auto put = [&out](std::string_view s) { out.insert(out.end(), s.begin(), s.end()); };
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          put("i");
          put(std::to_string(v));
          put("e");
        } else if constexpr (std::is_same_v<T, std::string>) {
          put(std::to_string(v.size()));
          put(":");
          put(v);
        } else if constexpr (std::is_same_v<T, BencodeList>) {
          put("l");
          for (const auto& item : v) encode_into(item, out);
          put("e");
        } else {
          put("d");
          for (const auto& entry : v) {
            put(std::to_string(entry.key.size()));
            put(":");
            put(entry.key);
            encode_into(entry.value, out);
          }
          put("e");
        }
      },
      value.storage());
}

}  // namespace

BencodeValue decode_bencode(std::span<const std::uint8_t> octets) { return Decoder(octets).decode_root(); }

Bytes encode_bencode(const BencodeValue& value) {
  Bytes out;
  encode_into(value, out);
  return out;
}

}  // namespace persistid

#include <doctest.h>

#include "persistid/bencode.hpp"
#include "persistid/error.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace persistid;

namespace {

BencodeValue decode(std::string_view text) { return decode_bencode(to_bytes(text)); }

Errc decode_error(std::string_view text) {
  try {
    decode(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("decoded without error: " << text);
  return Errc::Io;
}

}  // namespace

TEST_CASE("scalar values") {
  CHECK(decode("i42e") == BencodeValue(std::int64_t{42}));
  CHECK(decode("i0e") == BencodeValue(std::int64_t{0}));
  CHECK(decode("i-7e") == BencodeValue(std::int64_t{-7}));
  CHECK(decode("4:spam") == BencodeValue("spam"));
  CHECK(decode("0:") == BencodeValue(""));
  CHECK(decode("i9223372036854775807e").as_integer() == INT64_MAX);
  CHECK(decode("i-9223372036854775808e").as_integer() == INT64_MIN);
}

TEST_CASE("containers") {
  const auto d = decode("d1:ai1ee");
  REQUIRE(d.is_dict());
  REQUIRE(d.find("a"));
  CHECK(d.find("a")->as_integer() == 1);
  CHECK(d.find("b") == nullptr);

  const auto l = decode("l4:spami3ee");
  REQUIRE(l.as_list().size() == 2);
  CHECK(l.as_list()[0] == BencodeValue("spam"));

  const auto nested = decode("d1:ald1:xi1eee1:b0:e");
  CHECK(nested.find_entry("a")->value_span == ByteSpan{4, 10});
  CHECK(nested.find_entry("b")->value_span == ByteSpan{17, 2});
}

TEST_CASE("strict decoding errors") {
  CHECK(decode_error("d1:bi1e1:ai2ee") == Errc::UnsortedKeys);
  CHECK(decode_error("d1:ai1e1:ai2ee") == Errc::UnsortedKeys);
  CHECK(decode_error("i042e") == Errc::LeadingZeroInteger);
  CHECK(decode_error("i-0e") == Errc::LeadingZeroInteger);
  CHECK(decode_error("04:spam") == Errc::LeadingZeroInteger);
  CHECK(decode_error("ie") == Errc::BadInteger);
  CHECK(decode_error("i-e") == Errc::BadInteger);
  CHECK(decode_error("i1x2e") == Errc::BadInteger);
  CHECK(decode_error("i9223372036854775808e") == Errc::BadInteger);
  CHECK(decode_error("i42") == Errc::Truncated);
  CHECK(decode_error("5:spam") == Errc::Truncated);
  CHECK(decode_error("l4:spam") == Errc::Truncated);
  CHECK(decode_error("") == Errc::Truncated);
  CHECK(decode_error("i1ei2e") == Errc::TrailingData);
  CHECK(decode_error("x") == Errc::InvalidPrefix);
  CHECK(decode_error("di1ei2ee") == Errc::InvalidPrefix);
}

TEST_CASE("depth limit") {
  CHECK(decode_error(std::string(10000, 'l') + std::string(10000, 'e')) == Errc::InvalidPrefix);
  CHECK_NOTHROW(decode(std::string(100, 'l') + std::string(100, 'e')));
}

TEST_CASE("encode is the inverse of decode on generated trees") {
  testing::Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    const auto tree = testing::random_bencode(rng);
    const auto bytes = encode_bencode(tree);
    const auto decoded = decode_bencode(bytes);
    REQUIRE(decoded == tree);
    CHECK(encode_bencode(decoded) == bytes);
  }
}

TEST_CASE("fixture torrents re-encode byte for byte") {
  for (const auto& ref : testing::reference_torrents()) {
    CAPTURE(ref.file);
    const auto bytes = testing::read_fixture(ref.file);
    REQUIRE(!bytes.empty());
    CHECK(encode_bencode(decode_bencode(bytes)) == bytes);
  }
}

#include <doctest.h>

#include "persistid/error.hpp"
#include "persistid/magnet.hpp"
#include "persistid/ndn_access.hpp"
#include "support/generators.hpp"

using namespace persistid;

namespace {

template <typename Fn>
Errc error_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected persistid::Error");
  return Errc::Io;
}

const std::string kAb64 = "abababababababababababababababababababababababababababababababab";

}  // namespace

TEST_CASE("name escaping") {
  CHECK(escape_ndn_name(NdnName{{"lab", "ds", "1"}}) == "/lab/ds/1");
  CHECK(escape_ndn_name(NdnName{{"a/b"}}) == "/a%2fb");
  CHECK(escape_ndn_name(NdnName{{"v1.0"}}) == "/v1%2e0");
  CHECK(escape_ndn_name(NdnName{{"x y", ""}}) == "/x%20y/");
  CHECK(error_of([] { escape_ndn_name(NdnName{}); }) == Errc::EmptyName);
}

TEST_CASE("name unescaping") {
  CHECK(unescape_ndn_name("/lab/ds/1") == NdnName{{"lab", "ds", "1"}});
  CHECK(unescape_ndn_name("/a%2Fb") == NdnName{{"a/b"}});
  CHECK(unescape_ndn_name("/v1.0") == NdnName{{"v1.0"}});
  CHECK(error_of([] { unescape_ndn_name("lab/ds"); }) == Errc::NotRooted);
  CHECK(error_of([] { unescape_ndn_name(""); }) == Errc::NotRooted);
  CHECK(error_of([] { unescape_ndn_name("/a%2"); }) == Errc::BadEscape);
  CHECK(error_of([] { unescape_ndn_name("/a%zz"); }) == Errc::BadEscape);
}

TEST_CASE("access container parsing") {
  const auto info = parse_ndn_access(R"({"data_name":"/lab/ds/1","checksum_sha256":")" + kAb64 + R"("})");
  CHECK(info.data_name == NdnName{{"lab", "ds", "1"}});
  CHECK(info.content_checksum[31] == 0xab);
  CHECK_FALSE(info.signature);

  const auto sec = parse_ndn_access(R"({"data_name":"/lab/ds/1","checksum_sha256":")" + kAb64 +
                                    R"(","signature":"c2ln","cert_data_name":"/keys/alice"})");
  CHECK(sec.signature == to_bytes("sig"));
  CHECK(sec.cert_data_name == NdnName{{"keys", "alice"}});
  CHECK(parse_ndn_access(serialize_ndn_access(sec)) == sec);

  CHECK(error_of([] { parse_ndn_access(R"({"data_name":"/a"})"); }) == Errc::MissingField);
  CHECK(error_of([] { parse_ndn_access(R"({"checksum_sha256":")" + kAb64 + R"("})"); }) == Errc::MissingField);
  CHECK(error_of([] { parse_ndn_access(R"({"data_name":"/a","checksum_sha256":"abab"})"); }) ==
        Errc::BadChecksumLength);
  CHECK(error_of([] {
          parse_ndn_access(R"({"data_name":"/a","checksum_sha256":")" + kAb64 + R"(","signature":"c2ln"})");
        }) == Errc::OrphanSignature);
  CHECK(error_of([] {
          parse_ndn_access(R"({"data_name":"/a","checksum_sha256":")" + kAb64 + R"(","cert_data_name":"/k"})");
        }) == Errc::OrphanSignature);
  CHECK(error_of([] { parse_ndn_access("{"); }) == Errc::InvalidContainer);
  CHECK(error_of([] { parse_ndn_access("[]"); }) == Errc::InvalidContainer);
  CHECK(error_of([] { parse_ndn_access(R"({"data_name":1,"checksum_sha256":")" + kAb64 + R"("})"); }) ==
        Errc::InvalidContainer);
  CHECK(error_of([] { parse_ndn_access(R"({"data_name":"a","checksum_sha256":")" + kAb64 + R"("})"); }) ==
        Errc::InvalidContainer);
}

TEST_CASE("ndn_to_magnet") {
  NdnAccessInfo info;
  info.data_name = NdnName{{"lab", "ds", "1"}};
  info.content_checksum.fill(0xab);
  CHECK(serialize_magnet(ndn_to_magnet(info)) == "magnet:?xt=urn:ndn:%2flab%2fds%2f1." + kAb64 + "&dn=1");

  info.signature = to_bytes("sig");
  info.cert_data_name = NdnName{{"keys", "alice"}};
  CHECK(serialize_magnet(ndn_to_magnet(info)) == "magnet:?xt=urn:ndn:%2flab%2fds%2f1." + kAb64 +
                                                     "&xt=urn:ndnsec:c2ln.%2fkeys%2falice&dn=1");
}

TEST_CASE("extract_ndn_from_magnet") {
  CHECK(error_of([] { extract_ndn_from_magnet(parse_magnet("magnet:?xt=urn:btih:" + std::string(40, 'a'))); }) ==
        Errc::NoNdnEntry);
  const auto info =
      extract_ndn_from_magnet(parse_magnet("magnet:?xt=urn:btih:" + std::string(40, 'a') + "&xt=urn:ndn:%2Fx." + kAb64));
  CHECK(info.data_name == NdnName{{"x"}});
}

TEST_CASE("generated names and containers round trip") {
  testing::Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const auto info = testing::random_ndn_info(rng);
    CHECK(unescape_ndn_name(escape_ndn_name(info.data_name)) == info.data_name);
    CHECK(parse_ndn_access(serialize_ndn_access(info)) == info);
    const auto link = ndn_to_magnet(info);
    CHECK(extract_ndn_from_magnet(link) == info);
    CHECK(extract_ndn_from_magnet(parse_magnet(serialize_magnet(link))) == info);
  }
}

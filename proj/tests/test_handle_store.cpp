#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "persistid/error.hpp"
#include "persistid/handle_store.hpp"
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

const std::string kMagnet = "magnet:?xt=urn:btih:" + std::string(40, 'a') + "&dn=x";

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("persistid-test-" + std::to_string(std::random_device{}()) + "-" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("pid parsing") {
  const auto pid = Pid::parse("11022/abc-1");
  CHECK(pid.prefix == "11022");
  CHECK(pid.suffix == "abc-1");
  CHECK(Pid::parse("21.11148/x").prefix == "21.11148");
  CHECK(error_of([] { Pid::parse("11022"); }) == Errc::InvalidPid);
  CHECK(error_of([] { Pid::parse("11022/"); }) == Errc::InvalidPid);
  CHECK(error_of([] { Pid::parse("abc/x"); }) == Errc::InvalidPid);
  CHECK(error_of([] { Pid::parse("11022/a/b"); }) == Errc::InvalidPid);
  CHECK_FALSE(is_valid_prefix(".1"));
  CHECK_FALSE(is_valid_prefix(""));
}

TEST_CASE("prefix registration") {
  HandleStore store;
  CHECK(error_of([&] { store.create_handle("11022", "x", {{1, "URL", "http://a", 0}}); }) == Errc::UnknownPrefix);
  store.register_prefix("11022");
  CHECK(store.has_prefix("11022"));
  CHECK(error_of([&] { store.register_prefix("11022"); }) == Errc::DuplicatePrefix);
  CHECK_FALSE(store.ensure_prefix("11022"));
  CHECK(store.ensure_prefix("21.1"));
  CHECK(store.prefixes() == std::vector<std::string>{"11022", "21.1"});
  CHECK(error_of([&] { store.register_prefix("x1"); }) == Errc::InvalidPid);
}

TEST_CASE("create, update, get and resolve") {
  HandleStore store;
  store.set_clock([] { return std::int64_t{1700000000}; });
  store.register_prefix("11022");

  const auto url_only = store.create_handle("11022", "doc", {{1, "URL", "http://example.org/doc", 0}});
  CHECK(url_only.pid() == "11022/doc");
  CHECK(url_only.values[0].timestamp == 1700000000);
  CHECK(store.resolve_default("11022/doc") == ResolutionResult{TargetKind::Url, "http://example.org/doc"});

  const auto updated = store.update_handle("11022/doc", {{2, "MAGNET", kMagnet, 0}, {3, "EMAIL", "a@b", 0}});
  CHECK(updated.values.size() == 3);
  CHECK(store.resolve_default("11022/doc") == ResolutionResult{TargetKind::Magnet, kMagnet});
  CHECK(store.get_handle("11022/doc") == updated);

  // Replacing an index keeps the others.
  const auto replaced = store.update_handle("11022/doc", {{1, "URL", "http://example.org/new", 0}});
  CHECK(replaced.values.size() == 3);
  CHECK(replaced.find_type("URL")->data == "http://example.org/new");

  CHECK(error_of([&] { (void)store.get_handle("11022/missing"); }) == Errc::NotFound);
  CHECK(error_of([&] { store.update_handle("11022/missing", {}); }) == Errc::NotFound);
  CHECK(error_of([&] { (void)store.resolve_default("11022/missing"); }) == Errc::NotFound);
  CHECK(error_of([&] { store.create_handle("11022", "doc", {}); }) == Errc::DuplicateHandle);

  store.create_handle("11022", "mail", {{1, "EMAIL", "a@b", 0}});
  CHECK(error_of([&] { (void)store.resolve_default("11022/mail"); }) == Errc::NoTarget);
  CHECK(store.size() == 2);
}

TEST_CASE("minted suffixes") {
  HandleStore store;
  store.register_prefix("11022");
  const auto a = store.create_handle("11022", std::nullopt, {});
  const auto b = store.create_handle("11022", std::nullopt, {});
  CHECK(a.suffix != b.suffix);
  REQUIRE(a.suffix.size() == 36);
  for (const auto pos : {8, 13, 18, 23}) CHECK(a.suffix[pos] == '-');
}

TEST_CASE("value invariants") {
  HandleStore store;
  store.register_prefix("11022");
  auto invalid = [&](std::vector<HandleValue> values) {
    return error_of([&] { store.create_handle("11022", std::nullopt, values); }) == Errc::InvalidValue;
  };
  CHECK(invalid({{0, "URL", "http://a", 0}}));
  CHECK(invalid({{1, "URL", "http://a", 0}, {1, "EMAIL", "x", 0}}));
  CHECK(invalid({{1, "", "x", 0}}));
  CHECK(invalid({{1, "URL", "http://a", 0}, {2, "URL", "http://b", 0}}));
  CHECK(invalid({{1, "MAGNET", kMagnet, 0}, {2, "MAGNET", kMagnet, 0}}));
  CHECK(invalid({{1, "MAGNET", "http://not-a-magnet", 0}}));

  store.create_handle("11022", "one", {{1, "URL", "http://a", 0}});
  // The merged record must also hold at most one URL.
  CHECK(error_of([&] { store.update_handle("11022/one", {{2, "URL", "http://b", 0}}); }) == Errc::InvalidValue);
  CHECK(store.get_handle("11022/one").values.size() == 1);
}

TEST_CASE("journal survives reopen") {
  TempDir dir;
  const auto path = dir.path / "store.journal";
  std::string before;
  {
    HandleStore store(path);
    store.register_prefix("11022");
    store.create_handle("11022", "a", {{1, "URL", "http://a", 0}});
    store.create_handle("11022", "bin", {{1, "BLOB", std::string("\xff\x00\x01", 3), 0}});
    store.update_handle("11022/a", {{2, "MAGNET", kMagnet, 0}});
    before = store.snapshot();
  }
  HandleStore reopened(path);
  CHECK(reopened.snapshot() == before);
  CHECK(slurp(path) == before);
  CHECK(reopened.get_handle("11022/bin").values[0].data == std::string("\xff\x00\x01", 3));
  CHECK(reopened.resolve_default("11022/a").kind == TargetKind::Magnet);
}

TEST_CASE("torn final line is dropped") {
  TempDir dir;
  const auto path = dir.path / "store.journal";
  std::string before;
  {
    HandleStore store(path);
    store.register_prefix("11022");
    store.create_handle("11022", "a", {{1, "URL", "http://a", 0}});
    before = store.snapshot();
  }
  {
    std::ofstream out(path, std::ios::app | std::ios::binary);
    out << R"({"op":"put","prefix":"11022","suf)";
  }
  HandleStore reopened(path);
  CHECK(reopened.snapshot() == before);
  CHECK(slurp(path) == before);
}

TEST_CASE("corruption before the last line is an error") {
  TempDir dir;
  const auto path = dir.path / "store.journal";
  {
    std::ofstream out(path, std::ios::binary);
    out << "persistid-journal 1\nnot json\n{\"op\":\"prefix\",\"prefix\":\"1\"}\n";
  }
  CHECK(error_of([&] { HandleStore store(path); }) == Errc::Journal);
  {
    std::ofstream out(path, std::ios::binary);
    out << "something else\n";
  }
  CHECK(error_of([&] { HandleStore store(path); }) == Errc::Journal);
}

TEST_CASE("random operations keep indices unique and survive reopen") {
  TempDir dir;
  const auto path = dir.path / "store.journal";
  testing::Rng rng(5);
  std::vector<std::string> pids;
  std::string before;
  {
    HandleStore store(path);
    store.register_prefix("11022");
    for (int i = 0; i < 300; ++i) {
      std::vector<HandleValue> values;
      for (auto n = testing::pick(rng, 0, 3); n > 0; --n) {
        values.push_back({static_cast<std::uint32_t>(testing::pick(rng, 1, 6)), "DESC", testing::random_text(rng, 20), 0});
      }
      try {
        if (pids.empty() || testing::coin(rng, 0.3)) {
          pids.push_back(store.create_handle("11022", std::nullopt, values).pid());
        } else {
          store.update_handle(pids[testing::pick(rng, 0, pids.size() - 1)], values);
        }
      } catch (const Error& e) {
        CHECK(e.code() == Errc::InvalidValue);
      }
    }
    for (const auto& pid : pids) {
      const auto record = store.get_handle(pid);
      for (std::size_t i = 1; i < record.values.size(); ++i) {
        CHECK(record.values[i - 1].index < record.values[i].index);
      }
    }
    before = store.snapshot();
  }
  HandleStore reopened(path);
  CHECK(reopened.snapshot() == before);
  CHECK(reopened.size() == pids.size());
}

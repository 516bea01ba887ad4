#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "persistid/analysis.hpp"
#include "persistid/error.hpp"
#include "persistid/magnet.hpp"
#include "support/generators.hpp"

using namespace persistid;

TEST_CASE("nearest-rank quantiles") {
  const auto s = length_stats({"a", "bb", "ccc", "dddd", "eeeee"});
  CHECK(s.count == 5);
  CHECK(s.min == 1);
  CHECK(s.q1 == 2);
  CHECK(s.median == 3);
  CHECK(s.q3 == 4);
  CHECK(s.p95 == 5);
  CHECK(s.max == 5);
  CHECK(s.mean == 3);

  const auto one = length_stats({"xyz"});
  CHECK(one.min == 3);
  CHECK(one.q1 == 3);
  CHECK(one.median == 3);
  CHECK(one.q3 == 3);
  CHECK(one.max == 3);

  CHECK(nearest_rank({1, 2, 3, 4}, 50) == 2);
  CHECK(nearest_rank({1, 2, 3, 4}, 51) == 3);
  CHECK(nearest_rank({1, 2, 3, 4}, 100) == 4);
  CHECK_THROWS_AS(nearest_rank({}, 50), Error);
  CHECK_THROWS_AS(nearest_rank({1}, 0), Error);
  CHECK_THROWS_AS(length_stats({}), Error);
}

TEST_CASE("lengths count code points") {
  const auto s = length_stats({"\xc3\xa9t\xc3\xa9", ""});
  CHECK(s.max == 3);
  CHECK(s.min == 0);
}

TEST_CASE("matches a brute-force sort and index") {
  testing::Rng rng(21);
  for (int i = 0; i < 300; ++i) {
    std::vector<std::string> lines(testing::pick(rng, 1, 200));
    for (auto& line : lines) line = std::string(testing::pick(rng, 0, 400), 'x');
    std::vector<std::size_t> lengths;
    for (const auto& line : lines) lengths.push_back(line.size());
    std::sort(lengths.begin(), lengths.end());
    const auto n = lengths.size();
    auto at = [&](std::size_t pct) {
      std::size_t rank = pct * n / 100;
      if (pct * n % 100 != 0) ++rank;
      return static_cast<double>(lengths[std::max<std::size_t>(rank, 1) - 1]);
    };
    const auto s = length_stats(lines);
    CHECK(s.q1 == at(25));
    CHECK(s.median == at(50));
    CHECK(s.q3 == at(75));
    CHECK(s.p95 == at(95));
  }
}

TEST_CASE("read_lines and csv") {
  std::istringstream in("a\r\nbb\n\nccc");
  const auto lines = read_lines(in);
  CHECK(lines == std::vector<std::string>{"a", "bb", "", "ccc"});
  CHECK(box_stats_csv_header() == "count,min,q1,median,q3,p95,max,mean");
  CHECK(to_csv_row(length_stats({"a", "bb", "ccc", "dddd", "eeeee"})) == "5,1,2,3,4,5,5,3");
}

TEST_CASE("synthetic values have the requested size") {
  for (std::size_t size : {1u, 32u, 128u, 4096u}) CHECK(synthetic_value("URL", size).size() == size);
  CHECK(synthetic_value("MAGNET", 128).size() == 128);
  CHECK_NOTHROW(parse_magnet(synthetic_value("MAGNET", 128)));
  CHECK_THROWS_AS(synthetic_value("MAGNET", 32), Error);
  CHECK(power_of_two_sizes(5, 7) == std::vector<std::size_t>{32, 64, 128});
  CHECK_THROWS_AS(power_of_two_sizes(7, 5), Error);
}

TEST_CASE("latency benchmark against the in-process store") {
  HandleStore store;
  StoreBenchTarget target(store, "11022");
  BenchConfig config;
  config.sizes = {32, 128};
  config.trials = 20;
  config.warmup = 2;
  const auto points = latency_benchmark(target, config);
  REQUIRE(points.size() == 2);
  CHECK(points[1].value_size == 128);
  CHECK(points[1].trials == 20);
  CHECK(points[0].median >= 0);
  const auto csv = latency_csv(points);
  CHECK(csv.starts_with("size,trials,mean_s,median_s\n32,20,"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(store.size() == 2);
}

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "persistid/handle_store.hpp"

namespace persistid {

/// Five-number summary plus p95 and mean. Quantiles use the nearest-rank
/// method: the p-quantile of n sorted samples is sample ceil(p * n) (1-based).
struct BoxStats {
  std::size_t count = 0;
  double min = 0;
  double q1 = 0;
  double median = 0;
  double q3 = 0;
  double p95 = 0;
  double max = 0;
  double mean = 0;
};

/// Nearest-rank percentile (`percent` in 1..100) of ascending `sorted`.
double nearest_rank(const std::vector<double>& sorted, unsigned percent);

/// Throws Errc::EmptyInput.
BoxStats summarize(std::vector<double> samples);

/// Character (code point) counts per line. Throws Errc::EmptyInput.
BoxStats length_stats(const std::vector<std::string>& lines);

/// Reads newline-delimited strings; a trailing '\r' is stripped.
std::vector<std::string> read_lines(std::istream& in);

std::string box_stats_csv_header();
std::string to_csv_row(const BoxStats& stats);

struct LatencyPoint {
  std::size_t value_size = 0;  // characters
  std::size_t trials = 0;
  double mean = 0;    // seconds
  double median = 0;  // seconds
};

/// Where the benchmark mints and resolves its PIDs.
class BenchTarget {
 public:
  virtual ~BenchTarget() = default;
  /// Stores `value` under a fresh PID and returns that PID.
  virtual std::string create(const std::string& type, const std::string& value) = 0;
  /// One full resolution of `pid`.
  virtual void resolve(const std::string& pid) = 0;
};

/// Resolves in-process through HandleStore::resolve_default.
class StoreBenchTarget : public BenchTarget {
 public:
  StoreBenchTarget(HandleStore& store, std::string prefix);
  std::string create(const std::string& type, const std::string& value) override;
  void resolve(const std::string& pid) override;

 private:
  HandleStore& store_;
  std::string prefix_;
};

/// Resolves through a running resolver service over HTTP; minting uses the
/// authenticated PUT endpoint. Each resolve expects a 303.
class HttpBenchTarget : public BenchTarget {
 public:
  HttpBenchTarget(const std::string& host, int port, std::string prefix, std::string token);
  ~HttpBenchTarget() override;
  std::string create(const std::string& type, const std::string& value) override;
  void resolve(const std::string& pid) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string prefix_;
  std::string token_;
  std::uint64_t counter_ = 0;
};

struct BenchConfig {
  std::vector<std::size_t> sizes;  // value lengths in characters
  std::size_t trials = 100;
  std::size_t warmup = 10;
  std::string value_type = std::string(kTypeUrl);  // URL or MAGNET
};

/// Synthetic value of exactly `size` characters for the given type. MAGNET
/// values need at least 60 characters. Throws Errc::InvalidArgument.
std::string synthetic_value(std::string_view type, std::size_t size);

/// For each size: mint one PID holding a synthetic value of that length,
/// resolve it `warmup + trials` times and time the last `trials`.
std::vector<LatencyPoint> latency_benchmark(BenchTarget& target, const BenchConfig& config);

/// `size,trials,mean_s,median_s` plus one row per point.
std::string latency_csv(const std::vector<LatencyPoint>& points);

/// 2^lo .. 2^hi inclusive.
std::vector<std::size_t> power_of_two_sizes(unsigned lo, unsigned hi);

}  // namespace persistid

#include "persistid/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <istream>
#include <numeric>

#include <httplib.h>
#include <json.hpp>

#include "persistid/encoding.hpp"
#include "persistid/error.hpp"

namespace persistid {

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

constexpr std::string_view kMagnetHead = "magnet:?xt=urn:btih:0123456789abcdef0123456789abcdef01234567&dn=";

}  // namespace

double nearest_rank(const std::vector<double>& sorted, unsigned percent) {
  if (sorted.empty()) throw Error(Errc::EmptyInput, "no samples");
  if (percent == 0 || percent > 100) throw Error(Errc::InvalidArgument, "percentile must be in 1..100");
  // ceil(percent * n / 100) in integer arithmetic.
  const std::size_t n = sorted.size();
  const std::size_t rank = (percent * n + 99) / 100;
  return sorted[std::max<std::size_t>(rank, 1) - 1];
}

BoxStats summarize(std::vector<double> samples) {
  if (samples.empty()) throw Error(Errc::EmptyInput, "no samples");
  std::sort(samples.begin(), samples.end());
  BoxStats s;
  s.count = samples.size();
  s.min = samples.front();
  s.max = samples.back();
  s.q1 = nearest_rank(samples, 25);
  s.median = nearest_rank(samples, 50);
  s.q3 = nearest_rank(samples, 75);
  s.p95 = nearest_rank(samples, 95);
  s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
  return s;
}

BoxStats length_stats(const std::vector<std::string>& lines) {
  if (lines.empty()) throw Error(Errc::EmptyInput, "no lines");
  std::vector<double> lengths;
  lengths.reserve(lines.size());
  for (const auto& line : lines) lengths.push_back(static_cast<double>(utf8_length(line)));
  return summarize(std::move(lengths));
}

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::string box_stats_csv_header() { return "count,min,q1,median,q3,p95,max,mean"; }

std::string to_csv_row(const BoxStats& s) {
  return std::to_string(s.count) + "," + format_double(s.min) + "," + format_double(s.q1) + "," +
         format_double(s.median) + "," + format_double(s.q3) + "," + format_double(s.p95) + "," +
         format_double(s.max) + "," + format_double(s.mean);
}

StoreBenchTarget::StoreBenchTarget(HandleStore& store, std::string prefix)
    : store_(store), prefix_(std::move(prefix)) {
  store_.ensure_prefix(prefix_);
}

std::string StoreBenchTarget::create(const std::string& type, const std::string& value) {
  return store_.create_handle(prefix_, std::nullopt, {HandleValue{1, type, value, 0}}).pid();
}

void StoreBenchTarget::resolve(const std::string& pid) {
  const auto result = store_.resolve_default(pid);
  if (result.target.empty()) throw Error(Errc::NoTarget, pid);
}

struct HttpBenchTarget::Impl {
  httplib::Client client;
  Impl(const std::string& host, int port) : client(host, port) {}
};

HttpBenchTarget::HttpBenchTarget(const std::string& host, int port, std::string prefix, std::string token)
    : impl_(std::make_unique<Impl>(host, port)), prefix_(std::move(prefix)), token_(std::move(token)) {
  impl_->client.set_follow_location(false);
  impl_->client.set_keep_alive(true);
  impl_->client.set_tcp_nodelay(true);
}

HttpBenchTarget::~HttpBenchTarget() = default;

std::string HttpBenchTarget::create(const std::string& type, const std::string& value) {
  nlohmann::json body;
  body["values"] = nlohmann::json::array({{{"index", 1}, {"type", type}, {"data", value}}});
  const auto suffix = "bench-" + std::to_string(value.size()) + "-" + std::to_string(counter_++);
  const auto path = "/" + prefix_ + "/" + suffix;
  httplib::Headers headers{{"Authorization", "Bearer " + token_}};
  const auto res = impl_->client.Put(path, headers, body.dump(), "application/json");
  if (!res) throw Error(Errc::Io, "PUT " + path + ": " + httplib::to_string(res.error()));
  if (res->status != 200 && res->status != 201) {
    throw Error(Errc::Io, "PUT " + path + " returned " + std::to_string(res->status) + ": " + res->body);
  }
  return prefix_ + "/" + suffix;
}

void HttpBenchTarget::resolve(const std::string& pid) {
  const auto path = "/" + pid;
  const auto res = impl_->client.Get(path);
  if (!res) throw Error(Errc::Io, "GET " + path + ": " + httplib::to_string(res.error()));
  if (res->status != 303) throw Error(Errc::Io, "GET " + path + " returned " + std::to_string(res->status));
}

std::string synthetic_value(std::string_view type, std::size_t size) {
  if (type == kTypeMagnet) {
    if (size < kMagnetHead.size() + 1) {
      throw Error(Errc::InvalidArgument, "MAGNET values need at least " + std::to_string(kMagnetHead.size() + 1) +
                                             " characters");
    }
    return std::string(kMagnetHead) + std::string(size - kMagnetHead.size(), 'x');
  }
  constexpr std::string_view head = "http://example.org/";
  if (size <= head.size()) return std::string(size, 'x');
  return std::string(head) + std::string(size - head.size(), 'x');
}

std::vector<LatencyPoint> latency_benchmark(BenchTarget& target, const BenchConfig& config) {
  if (config.sizes.empty()) throw Error(Errc::InvalidArgument, "no value sizes");
  if (config.trials == 0) throw Error(Errc::InvalidArgument, "trials must be >= 1");

  using Clock = std::chrono::steady_clock;
  std::vector<LatencyPoint> points;
  for (const auto size : config.sizes) {
    const auto pid = target.create(config.value_type, synthetic_value(config.value_type, size));
    for (std::size_t i = 0; i < config.warmup; ++i) target.resolve(pid);

    std::vector<double> samples;
    samples.reserve(config.trials);
    for (std::size_t i = 0; i < config.trials; ++i) {
      const auto start = Clock::now();
      target.resolve(pid);
      samples.push_back(std::chrono::duration<double>(Clock::now() - start).count());
    }
    const auto stats = summarize(std::move(samples));
    points.push_back(LatencyPoint{size, config.trials, stats.mean, stats.median});
  }
  return points;
}

std::string latency_csv(const std::vector<LatencyPoint>& points) {
  std::string out = "size,trials,mean_s,median_s\n";
  for (const auto& p : points) {
    out += std::to_string(p.value_size) + "," + std::to_string(p.trials) + "," + format_double(p.mean) + "," +
           format_double(p.median) + "\n";
  }
  return out;
}

std::vector<std::size_t> power_of_two_sizes(unsigned lo, unsigned hi) {
  if (lo > hi || hi > 40) throw Error(Errc::InvalidArgument, "bad exponent range");
  std::vector<std::size_t> sizes;
  for (unsigned e = lo; e <= hi; ++e) sizes.push_back(std::size_t{1} << e);
  return sizes;
}

}  // namespace persistid

// persistid: command-line front-end for magnet links, torrent and NDN
// ingestion, the handle store, the resolver service, the transfer model and
// the evaluation helpers.
//
// Exit status: 0 on success, 1 on operational errors, 2 on usage errors.

#include <charconv>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "persistid/analysis.hpp"
#include "persistid/error.hpp"
#include "persistid/handle_store.hpp"
#include "persistid/magnet.hpp"
#include "persistid/ndn_access.hpp"
#include "persistid/resolver.hpp"
#include "persistid/torrent.hpp"
#include "persistid/transfer_model.hpp"

namespace {

using namespace persistid;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

std::span<const std::uint8_t> as_octets(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

double parse_double(std::string_view text, const char* what) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw UsageError(std::string("bad ") + what + ": " + std::string(text));
  }
  return v;
}

ChunkPlan parse_chunks(const std::vector<std::string>& specs) {
  ChunkPlan plan;
  for (const auto& spec : specs) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw UsageError("chunk must be VOLUME:BANDWIDTH: " + spec);
    plan.chunks.push_back({parse_double(std::string_view(spec).substr(0, colon), "chunk volume"),
                           parse_double(std::string_view(spec).substr(colon + 1), "chunk bandwidth")});
  }
  return plan;
}

std::string_view xt_kind(const XtEntry& entry) {
  static constexpr std::string_view names[] = {"btih", "sha1", "tree:tiger", "kzhash", "ndn", "ndnsec", "unknown"};
  return names[entry.index()];
}

// --- magnet ---------------------------------------------------------------

void magnet_parse(const std::string& uri, bool pretty) {
  const auto link = parse_magnet(uri);
  if (!pretty) {
    // One canonical `key=value` parameter per line; `magnet make --from`
    // reads this back.
    const auto canonical = serialize_magnet(link);
    std::string_view query = std::string_view(canonical).substr(8);
    while (!query.empty()) {
      const auto amp = query.find('&');
      std::cout << query.substr(0, amp) << "\n";
      query = amp == std::string_view::npos ? std::string_view{} : query.substr(amp + 1);
    }
    return;
  }
  for (const auto& entry : link.xts) std::cout << "xt  " << xt_kind(entry) << "  " << serialize_xt(entry) << "\n";
  if (link.display_name) std::cout << "dn  " << *link.display_name << "\n";
  if (link.exact_length) std::cout << "xl  " << *link.exact_length << "\n";
  for (const auto& v : link.trackers) std::cout << "tr  " << v << "\n";
  for (const auto& v : link.acceptable_sources) std::cout << "as  " << v << "\n";
  for (const auto& v : link.keywords) std::cout << "kt  " << v << "\n";
  for (const auto& [k, v] : link.unknown_params) std::cout << "?   " << k << "=" << v << "\n";
}

struct MakeArgs {
  std::string from;
  std::vector<std::string> xts, trackers, sources, keywords;
  std::optional<std::string> dn;
  std::optional<std::uint64_t> xl;
};

void magnet_make(const MakeArgs& args) {
  MagnetLink link;
  if (!args.from.empty()) {
    std::istringstream lines(read_input(args.from));
    std::string query;
    for (std::string line; std::getline(lines, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      if (!query.empty()) query.push_back('&');
      query += line;
    }
    link = parse_magnet("magnet:?" + query);
  }
  for (const auto& x : args.xts) link.xts.push_back(parse_xt(x));
  if (args.dn) link.display_name = *args.dn;
  if (args.xl) link.exact_length = *args.xl;
  link.trackers.insert(link.trackers.end(), args.trackers.begin(), args.trackers.end());
  link.acceptable_sources.insert(link.acceptable_sources.end(), args.sources.begin(), args.sources.end());
  link.keywords.insert(link.keywords.end(), args.keywords.begin(), args.keywords.end());
  if (link.xts.empty()) throw Error(Errc::NoExactTopic, "give at least one --xt");
  std::cout << serialize_magnet(link) << "\n";
}

// --- pid ------------------------------------------------------------------

struct ValueArgs {
  std::vector<std::string> values;  // INDEX:TYPE:DATA
  std::optional<std::string> url;
  std::optional<std::string> magnet;
};

std::vector<HandleValue> collect_values(const ValueArgs& args, const HandleRecord* existing) {
  std::vector<HandleValue> out;
  for (const auto& spec : args.values) {
    const auto first = spec.find(':');
    const auto second = first == std::string::npos ? first : spec.find(':', first + 1);
    if (second == std::string::npos) throw UsageError("value must be INDEX:TYPE:DATA: " + spec);
    const auto index = parse_double(std::string_view(spec).substr(0, first), "value index");
    if (index < 1 || index > 4294967295.0 || index != static_cast<std::uint32_t>(index)) {
      throw UsageError("bad value index: " + spec);
    }
    out.push_back({static_cast<std::uint32_t>(index), spec.substr(first + 1, second - first - 1), spec.substr(second + 1), 0});
  }
  auto next_index = [&]() {
    std::uint32_t top = 0;
    if (existing) {
      for (const auto& v : existing->values) top = std::max(top, v.index);
    }
    for (const auto& v : out) top = std::max(top, v.index);
    return top + 1;
  };
  auto add_typed = [&](std::string_view type, const std::string& data) {
    const HandleValue* current = existing ? existing->find_type(type) : nullptr;
    const std::uint32_t index = current ? current->index : next_index();
    out.push_back({index, std::string(type), data, 0});
  };
  if (args.url) add_typed(kTypeUrl, *args.url);
  if (args.magnet) add_typed(kTypeMagnet, *args.magnet);
  return out;
}

void print_record(const HandleRecord& record) {
  for (const auto& v : record.values) std::cout << v.index << "\t" << v.type << "\t" << v.data << "\n";
}

// --- stats / bench --------------------------------------------------------

void print_box(const BoxStats& s, bool pretty) {
  if (!pretty) {
    std::cout << box_stats_csv_header() << "\n" << to_csv_row(s) << "\n";
    return;
  }
  std::cout << "count   " << s.count << "\nmin     " << s.min << "\nq1      " << s.q1 << "\nmedian  " << s.median
            << "\nq3      " << s.q3 << "\np95     " << s.p95 << "\nmax     " << s.max << "\nmean    " << s.mean << "\n";
}

std::pair<std::string, int> split_host_port(const std::string& text, int default_port) {
  std::string rest = text;
  if (rest.starts_with("http://")) rest = rest.substr(7);
  if (!rest.empty() && rest.back() == '/') rest.pop_back();
  const auto colon = rest.rfind(':');
  if (colon == std::string::npos) return {rest, default_port};
  const auto port = parse_double(std::string_view(rest).substr(colon + 1), "port");
  return {rest.substr(0, colon), static_cast<int>(port)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persistent identifiers with location-independent resolution targets"};
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "Read options from a TOML/INI file");
  bool pretty = false;
  app.add_flag("--pretty", pretty, "Human-oriented output");

  std::function<void()> action;

  // magnet
  auto* magnet = app.add_subcommand("magnet", "Parse and build magnet links")->require_subcommand(1, 1);
  std::string magnet_uri;
  auto* magnet_parse_cmd = magnet->add_subcommand("parse", "Print the parameters of a magnet link");
  magnet_parse_cmd->add_option("uri", magnet_uri)->required();
  magnet_parse_cmd->add_flag("--pretty", pretty);
  magnet_parse_cmd->callback([&] { action = [&] { magnet_parse(magnet_uri, pretty); }; });

  MakeArgs make_args;
  auto* magnet_make_cmd = magnet->add_subcommand("make", "Build a canonical magnet link");
  magnet_make_cmd->add_option("--from", make_args.from, "key=value lines as printed by `magnet parse` ('-' = stdin)");
  magnet_make_cmd->add_option("--xt", make_args.xts, "xt URN, e.g. urn:btih:<hex>");
  magnet_make_cmd->add_option("--dn", make_args.dn, "Display name");
  magnet_make_cmd->add_option("--xl", make_args.xl, "Exact length in bytes");
  magnet_make_cmd->add_option("--tr", make_args.trackers, "Tracker URL");
  magnet_make_cmd->add_option("--as", make_args.sources, "Acceptable source URL");
  magnet_make_cmd->add_option("--kt", make_args.keywords, "Keyword");
  magnet_make_cmd->callback([&] { action = [&] { magnet_make(make_args); }; });

  // torrent
  auto* torrent = app.add_subcommand("torrent", "Torrent metainfo files")->require_subcommand(1, 1);
  std::string torrent_file;
  bool with_trackers = false;
  auto* infohash_cmd = torrent->add_subcommand("infohash", "Print the 40-hex infohash");
  infohash_cmd->add_option("file", torrent_file)->required();
  infohash_cmd->callback([&] {
    action = [&] { std::cout << to_hex(compute_infohash(as_octets(read_input(torrent_file)))) << "\n"; };
  });
  auto* to_magnet_cmd = torrent->add_subcommand("to-magnet", "Convert a torrent to a magnet link");
  to_magnet_cmd->add_option("file", torrent_file)->required();
  to_magnet_cmd->add_flag("--trackers", with_trackers, "Keep tracker URLs as tr parameters");
  to_magnet_cmd->callback([&] {
    action = [&] {
      std::cout << serialize_magnet(torrent_to_magnet(as_octets(read_input(torrent_file)), with_trackers)) << "\n";
    };
  });

  // ndn
  auto* ndn = app.add_subcommand("ndn", "NDN access information")->require_subcommand(1, 1);
  std::string ndn_input;
  auto* ndn_to_cmd = ndn->add_subcommand("to-magnet", "NDN access JSON to magnet link");
  ndn_to_cmd->add_option("file", ndn_input, "JSON container ('-' = stdin)")->required();
  ndn_to_cmd->callback([&] {
    action = [&] { std::cout << serialize_magnet(ndn_to_magnet(parse_ndn_access(read_input(ndn_input)))) << "\n"; };
  });
  auto* ndn_from_cmd = ndn->add_subcommand("from-magnet", "Magnet link to NDN access JSON");
  ndn_from_cmd->add_option("uri", ndn_input)->required();
  ndn_from_cmd->callback([&] {
    action = [&] { std::cout << serialize_ndn_access(extract_ndn_from_magnet(parse_magnet(ndn_input))) << "\n"; };
  });

  // pid
  auto* pid = app.add_subcommand("pid", "Handle store operations")->require_subcommand(1, 1);
  std::string store_path;
  std::string prefix;
  std::optional<std::string> suffix;
  std::string pid_text;
  std::optional<std::string> force_type;
  ValueArgs value_args;
  auto add_value_opts = [&](CLI::App* cmd) {
    cmd->add_option("--value", value_args.values, "INDEX:TYPE:DATA");
    cmd->add_option("--url", value_args.url, "URL value");
    cmd->add_option("--magnet", value_args.magnet, "MAGNET value");
  };
  auto* create_cmd = pid->add_subcommand("create", "Create a handle (registers the prefix if needed)");
  create_cmd->add_option("--store", store_path, "Journal file")->required();
  create_cmd->add_option("--prefix", prefix)->required();
  create_cmd->add_option("--suffix", suffix, "Omit to mint a random suffix");
  add_value_opts(create_cmd);
  create_cmd->callback([&] {
    action = [&] {
      HandleStore store(store_path);
      store.ensure_prefix(prefix);
      std::cout << store.create_handle(prefix, suffix, collect_values(value_args, nullptr)).pid() << "\n";
    };
  });
  auto* update_cmd = pid->add_subcommand("update", "Replace or add values");
  update_cmd->add_option("--store", store_path)->required();
  update_cmd->add_option("pid", pid_text)->required();
  add_value_opts(update_cmd);
  update_cmd->callback([&] {
    action = [&] {
      HandleStore store(store_path);
      const auto existing = store.get_handle(pid_text);
      print_record(store.update_handle(pid_text, collect_values(value_args, &existing)));
    };
  });
  auto* get_cmd = pid->add_subcommand("get", "Print INDEX<TAB>TYPE<TAB>DATA per value");
  get_cmd->add_option("--store", store_path)->required();
  get_cmd->add_option("pid", pid_text)->required();
  get_cmd->callback([&] { action = [&] { print_record(HandleStore(store_path).get_handle(pid_text)); }; });
  auto* resolve_cmd = pid->add_subcommand("resolve", "Print KIND<TAB>TARGET");
  resolve_cmd->add_option("--store", store_path)->required();
  resolve_cmd->add_option("pid", pid_text)->required();
  resolve_cmd->add_option("--type", force_type, "Force URL or MAGNET");
  resolve_cmd->callback([&] {
    action = [&] {
      HandleStore store(store_path);
      if (force_type) {
        const auto record = store.get_handle(pid_text);
        const auto* value = record.find_type(*force_type);
        if (!value) throw Error(Errc::NoTarget, pid_text + " has no " + *force_type + " value");
        std::cout << value->type << "\t" << value->data << "\n";
        return;
      }
      const auto result = store.resolve_default(pid_text);
      std::cout << to_string(result.kind) << "\t" << result.target << "\n";
    };
  });

  // serve
  ServiceConfig config;
  std::string listen = "127.0.0.1:8080";
  auto* serve = app.add_subcommand("serve", "Run the HTTP resolver service");
  serve->add_option("--listen", listen, "HOST:PORT")->capture_default_str();
  serve->add_option("--store", config.store_path, "Journal file (memory when omitted)");
  serve->add_option("--prefix", config.prefixes, "Prefix served by this instance")->required();
  serve->add_option("--token", config.token, "Bearer token for mutations")->envname("PERSISTID_TOKEN");
  serve->callback([&] {
    action = [&] {
      std::tie(config.host, config.port) = split_host_port(listen, 8080);
      run_service(config);
    };
  });

  // estimate
  auto* estimate = app.add_subcommand("estimate", "Transfer duration model")->require_subcommand(1, 1);
  double tr = 0, tb = 0;
  std::vector<std::string> chunk_specs;
  auto add_model_opts = [&](CLI::App* cmd, bool bootstrap) {
    cmd->add_option("--tr", tr, "Resolution time [s]")->required();
    if (bootstrap) cmd->add_option("--tb", tb, "Bootstrap time [s]")->required();
    cmd->add_option("--chunk", chunk_specs, "VOLUME:BANDWIDTH (bytes, bytes/s)")->required();
  };
  auto print_estimate = [&](const TransferEstimate& e) {
    if (pretty) {
      std::cout << "resolution " << format_double(e.resolution_time) << " s\nbootstrap  "
                << format_double(e.bootstrap_time) << " s\nduration   " << format_double(e.duration) << " s\n";
    } else {
      std::cout << format_double(e.duration) << "\n";
    }
  };
  auto* parallel_cmd = estimate->add_subcommand("parallel", "Multi-source transfer");
  add_model_opts(parallel_cmd, true);
  parallel_cmd->callback([&] { action = [&] { print_estimate(estimate_parallel(tr, tb, parse_chunks(chunk_specs))); }; });
  auto* serial_cmd = estimate->add_subcommand("serial", "Single-source transfer");
  add_model_opts(serial_cmd, false);
  serial_cmd->callback([&] { action = [&] { print_estimate(estimate_serial(tr, parse_chunks(chunk_specs))); }; });
  auto* compare_cmd = estimate->add_subcommand("compare", "Serial minus parallel duration");
  add_model_opts(compare_cmd, true);
  compare_cmd->callback([&] { action = [&] { std::cout << format_double(compare(tr, tb, parse_chunks(chunk_specs))) << "\n"; }; });

  // stats
  auto* stats = app.add_subcommand("stats", "String statistics")->require_subcommand(1, 1);
  std::string lines_file = "-";
  auto* lengths_cmd = stats->add_subcommand("lengths", "Length distribution of newline-delimited strings");
  lengths_cmd->add_option("file", lines_file, "Input ('-' = stdin)")->capture_default_str();
  lengths_cmd->add_flag("--pretty", pretty);
  lengths_cmd->callback([&] {
    action = [&] {
      std::istringstream in(read_input(lines_file));
      print_box(length_stats(read_lines(in)), pretty);
    };
  });

  // bench
  auto* bench = app.add_subcommand("bench", "Benchmarks")->require_subcommand(1, 1);
  BenchConfig bench_config;
  unsigned min_exp = 5, max_exp = 12;
  std::string endpoint;
  std::string bench_prefix = "11022";
  std::string bench_token;
  std::string bench_store;
  auto* latency_cmd = bench->add_subcommand("latency", "Resolution time against value size (CSV)");
  latency_cmd->add_option("--sizes", bench_config.sizes, "Explicit value sizes")->delimiter(',');
  latency_cmd->add_option("--min-exp", min_exp, "Smallest size 2^N")->capture_default_str();
  latency_cmd->add_option("--max-exp", max_exp, "Largest size 2^N")->capture_default_str();
  latency_cmd->add_option("--trials", bench_config.trials)->capture_default_str();
  latency_cmd->add_option("--warmup", bench_config.warmup)->capture_default_str();
  latency_cmd->add_option("--type", bench_config.value_type, "URL or MAGNET")->capture_default_str();
  latency_cmd->add_option("--endpoint", endpoint, "http://HOST:PORT of a running service (in-process otherwise)");
  latency_cmd->add_option("--prefix", bench_prefix)->capture_default_str();
  latency_cmd->add_option("--token", bench_token)->envname("PERSISTID_TOKEN");
  latency_cmd->add_option("--store", bench_store, "Journal for the in-process store (memory when omitted)");
  latency_cmd->callback([&] {
    action = [&] {
      if (bench_config.sizes.empty()) bench_config.sizes = power_of_two_sizes(min_exp, max_exp);
      std::vector<LatencyPoint> points;
      if (endpoint.empty()) {
        auto store = bench_store.empty() ? std::make_unique<HandleStore>() : std::make_unique<HandleStore>(bench_store);
        StoreBenchTarget target(*store, bench_prefix);
        points = latency_benchmark(target, bench_config);
      } else {
        const auto [host, port] = split_host_port(endpoint, 80);
        HttpBenchTarget target(host, port, bench_prefix, bench_token);
        points = latency_benchmark(target, bench_config);
      }
      std::cout << latency_csv(points);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    action();
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "persistid: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "persistid: " << e.what() << "\n";
    return 1;
  }
}

#include "persistid/handle_store.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "persistid/encoding.hpp"
#include "persistid/error.hpp"
#include "persistid/magnet.hpp"

namespace persistid {

namespace {

using nlohmann::ordered_json;

constexpr std::string_view kJournalHeader = "persistid-journal 1";

ordered_json value_to_json(const HandleValue& v) {
  ordered_json j;
  j["index"] = v.index;
  j["type"] = v.type;
  if (is_valid_utf8(v.data)) {
    j["data"] = v.data;
  } else {
    j["data_b64"] = to_base64url(to_bytes(v.data));
  }
  j["timestamp"] = v.timestamp;
  return j;
}

HandleValue value_from_json(const ordered_json& j) {
  HandleValue v;
  v.index = j.at("index").get<std::uint32_t>();
  v.type = j.at("type").get<std::string>();
  if (const auto it = j.find("data"); it != j.end()) {
    v.data = it->get<std::string>();
  } else {
    auto octets = from_base64url(j.at("data_b64").get<std::string>());
    if (!octets) throw Error(Errc::Journal, "bad data_b64");
    v.data = to_string(*octets);
  }
  v.timestamp = j.at("timestamp").get<std::int64_t>();
  return v;
}

std::string record_line(const HandleRecord& r) {
  ordered_json j;
  j["op"] = "put";
  j["prefix"] = r.prefix;
  j["suffix"] = r.suffix;
  j["values"] = ordered_json::array();
  for (const auto& v : r.values) j["values"].push_back(value_to_json(v));
  return j.dump();
}

std::string prefix_line(const std::string& prefix) {
  ordered_json j;
  j["op"] = "prefix";
  j["prefix"] = prefix;
  return j.dump();
}

bool is_valid_suffix(std::string_view suffix) {
  if (suffix.empty() || suffix.find('/') != std::string_view::npos || !is_valid_utf8(suffix)) return false;
  return std::none_of(suffix.begin(), suffix.end(), [](char c) { return static_cast<unsigned char>(c) < 0x20; });
}

void sort_values(std::vector<HandleValue>& values) {
  std::sort(values.begin(), values.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
}

}  // namespace

const HandleValue* HandleRecord::find_type(std::string_view type) const {
  const auto it = std::find_if(values.begin(), values.end(), [type](const HandleValue& v) { return v.type == type; });
  return it == values.end() ? nullptr : &*it;
}

bool is_valid_prefix(std::string_view prefix) noexcept {
  if (prefix.empty() || prefix.front() == '.' || prefix.back() == '.') return false;
  return std::all_of(prefix.begin(), prefix.end(), [](char c) { return (c >= '0' && c <= '9') || c == '.'; });
}

Pid Pid::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) throw Error(Errc::InvalidPid, "expected prefix/suffix: " + std::string(text));
  Pid pid{std::string(text.substr(0, slash)), std::string(text.substr(slash + 1))};
  if (!is_valid_prefix(pid.prefix)) throw Error(Errc::InvalidPid, "bad prefix: " + pid.prefix);
  if (!is_valid_suffix(pid.suffix)) throw Error(Errc::InvalidPid, "bad suffix: " + pid.suffix);
  return pid;
}

std::string_view to_string(TargetKind kind) noexcept { return kind == TargetKind::Magnet ? kTypeMagnet : kTypeUrl; }

void validate_values(const std::vector<HandleValue>& values) {
  std::set<std::uint32_t> seen;
  int magnets = 0;
  int urls = 0;
  for (const auto& v : values) {
    if (v.index < 1) throw Error(Errc::InvalidValue, "value index must be >= 1");
    if (!seen.insert(v.index).second) {
      throw Error(Errc::InvalidValue, "duplicate value index " + std::to_string(v.index));
    }
    if (v.type.empty()) throw Error(Errc::InvalidValue, "empty value type");
    if (v.data.size() > std::numeric_limits<std::uint32_t>::max()) {
      throw Error(Errc::InvalidValue, "value data exceeds 4-byte length field");
    }
    if (v.type == kTypeUrl) ++urls;
    if (v.type == kTypeMagnet) {
      ++magnets;
      try {
        parse_magnet(v.data);
      } catch (const Error& e) {
        throw Error(Errc::InvalidValue, std::string("MAGNET value is not a magnet link: ") + e.what());
      }
    }
  }
  if (magnets > 1) throw Error(Errc::InvalidValue, "at most one MAGNET value per record");
  if (urls > 1) throw Error(Errc::InvalidValue, "at most one URL value per record");
}

void HandleStore::FileCloser::operator()(std::FILE* f) const noexcept { std::fclose(f); }

HandleStore::HandleStore() : rng_(std::random_device{}()) {}

HandleStore::HandleStore(std::filesystem::path journal) : path_(std::move(journal)), rng_(std::random_device{}()) {
  replay();
  compact();
}

HandleStore::~HandleStore() = default;

void HandleStore::set_clock(Clock clock) {
  std::unique_lock lock(mutex_);
  clock_ = std::move(clock);
}

std::int64_t HandleStore::now() const {
  if (clock_) return clock_();
  return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count();
}

void HandleStore::replay() {
  std::ifstream in(path_, std::ios::binary);
  if (!in) return;  // new store

  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
  if (lines.empty()) return;
  if (lines.front() != kJournalHeader) {
    throw Error(Errc::Journal, path_.string() + ": unrecognized journal header '" + lines.front() + "'");
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    try {
      const auto j = ordered_json::parse(lines[i]);
      const auto op = j.at("op").get<std::string>();
      if (op == "prefix") {
        prefixes_.insert(j.at("prefix").get<std::string>());
      } else if (op == "put") {
        HandleRecord r;
        r.prefix = j.at("prefix").get<std::string>();
        r.suffix = j.at("suffix").get<std::string>();
        for (const auto& v : j.at("values")) r.values.push_back(value_from_json(v));
        records_[r.pid()] = std::move(r);
      } else {
        throw Error(Errc::Journal, "unknown op " + op);
      }
    } catch (const std::exception& e) {
      // A torn final line is an interrupted append; anything earlier is corruption.
      if (i + 1 == lines.size()) break;
      throw Error(Errc::Journal, path_.string() + ":" + std::to_string(i + 1) + ": " + e.what());
    }
  }
}

std::string HandleStore::snapshot() const {
  std::shared_lock lock(mutex_);
  std::string out(kJournalHeader);
  out.push_back('\n');
  for (const auto& p : prefixes_) out += prefix_line(p) + "\n";
  for (const auto& [pid, record] : records_) out += record_line(record) + "\n";
  return out;
}

void HandleStore::compact() {
  const auto text = snapshot();
  auto tmp = path_;
  tmp += ".tmp";
  {
    std::unique_ptr<std::FILE, FileCloser> f(std::fopen(tmp.c_str(), "wb"));
    if (!f) throw Error(Errc::Io, "cannot write " + tmp.string());
    if (std::fwrite(text.data(), 1, text.size(), f.get()) != text.size() || std::fflush(f.get()) != 0 ||
        ::fsync(::fileno(f.get())) != 0) {
      throw Error(Errc::Io, "cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path_, ec);
  if (ec) throw Error(Errc::Io, "cannot replace " + path_.string() + ": " + ec.message());
  journal_.reset(std::fopen(path_.c_str(), "ab"));
  if (!journal_) throw Error(Errc::Io, "cannot open " + path_.string());
}

void HandleStore::append_line(const std::string& line) {
  if (!journal_) return;
  const std::string text = line + "\n";
  if (std::fwrite(text.data(), 1, text.size(), journal_.get()) != text.size() || std::fflush(journal_.get()) != 0 ||
      ::fdatasync(::fileno(journal_.get())) != 0) {
    throw Error(Errc::Io, "journal append failed: " + path_.string());
  }
}

void HandleStore::register_prefix(const std::string& prefix) {
  if (!is_valid_prefix(prefix)) throw Error(Errc::InvalidPid, "bad prefix: " + prefix);
  std::unique_lock lock(mutex_);
  if (prefixes_.contains(prefix)) throw Error(Errc::DuplicatePrefix, prefix);
  append_line(prefix_line(prefix));
  prefixes_.insert(prefix);
}

bool HandleStore::ensure_prefix(const std::string& prefix) {
  try {
    register_prefix(prefix);
    return true;
  } catch (const Error& e) {
    if (e.code() == Errc::DuplicatePrefix) return false;
    throw;
  }
}

bool HandleStore::has_prefix(std::string_view prefix) const {
  std::shared_lock lock(mutex_);
  return prefixes_.contains(prefix);
}

std::string HandleStore::mint_suffix() {
  const std::uint64_t hi = rng_();
  const std::uint64_t lo = rng_();
  Bytes octets;
  for (int shift = 56; shift >= 0; shift -= 8) octets.push_back(static_cast<std::uint8_t>(hi >> shift));
  for (int shift = 56; shift >= 0; shift -= 8) octets.push_back(static_cast<std::uint8_t>(lo >> shift));
  const auto hex = to_hex(octets);
  return hex.substr(0, 8) + "-" + hex.substr(8, 4) + "-" + hex.substr(12, 4) + "-" + hex.substr(16, 4) + "-" +
         hex.substr(20);
}

HandleRecord HandleStore::create_handle(const std::string& prefix, std::optional<std::string> suffix,
                                        std::vector<HandleValue> values) {
  if (suffix && !is_valid_suffix(*suffix)) throw Error(Errc::InvalidPid, "bad suffix: " + *suffix);
  validate_values(values);

  std::unique_lock lock(mutex_);
  if (!prefixes_.contains(prefix)) throw Error(Errc::UnknownPrefix, prefix);
  HandleRecord record;
  record.prefix = prefix;
  if (suffix) {
    record.suffix = std::move(*suffix);
    if (records_.contains(record.pid())) throw Error(Errc::DuplicateHandle, record.pid());
  } else {
    do {
      record.suffix = mint_suffix();
    } while (records_.contains(record.pid()));
  }
  const auto stamp = now();
  for (auto& v : values) v.timestamp = stamp;
  sort_values(values);
  record.values = std::move(values);

  append_line(record_line(record));
  records_[record.pid()] = record;
  return record;
}

HandleRecord HandleStore::update_handle(std::string_view pid, std::vector<HandleValue> values) {
  const auto parsed = Pid::parse(pid);
  validate_values(values);
  std::unique_lock lock(mutex_);
  const auto it = records_.find(parsed.str());
  if (it == records_.end()) throw Error(Errc::NotFound, std::string(pid));

  HandleRecord updated = it->second;
  const auto stamp = now();
  for (auto& v : values) {
    v.timestamp = stamp;
    auto existing = std::find_if(updated.values.begin(), updated.values.end(),
                                 [&v](const HandleValue& old) { return old.index == v.index; });
    if (existing != updated.values.end()) {
      *existing = std::move(v);
    } else {
      updated.values.push_back(std::move(v));
    }
  }
  validate_values(updated.values);
  sort_values(updated.values);

  append_line(record_line(updated));
  it->second = updated;
  return updated;
}

std::optional<HandleRecord> HandleStore::find_handle(std::string_view pid) const {
  std::shared_lock lock(mutex_);
  const auto it = records_.find(pid);
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

HandleRecord HandleStore::get_handle(std::string_view pid) const {
  Pid::parse(pid);
  auto record = find_handle(pid);
  if (!record) throw Error(Errc::NotFound, std::string(pid));
  return std::move(*record);
}

ResolutionResult HandleStore::resolve_default(std::string_view pid) const {
  std::shared_lock lock(mutex_);
  const auto it = records_.find(pid);
  if (it == records_.end()) throw Error(Errc::NotFound, std::string(pid));
  if (const auto* magnet = it->second.find_type(kTypeMagnet)) return {TargetKind::Magnet, magnet->data};
  if (const auto* url = it->second.find_type(kTypeUrl)) return {TargetKind::Url, url->data};
  throw Error(Errc::NoTarget, std::string(pid) + " has neither MAGNET nor URL");
}

std::size_t HandleStore::size() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

std::vector<std::string> HandleStore::prefixes() const {
  std::shared_lock lock(mutex_);
  return {prefixes_.begin(), prefixes_.end()};
}

}  // namespace persistid

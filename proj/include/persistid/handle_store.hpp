#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace persistid {

inline constexpr std::string_view kTypeUrl = "URL";
inline constexpr std::string_view kTypeMagnet = "MAGNET";

/// One indexed, typed value of a handle record.
struct HandleValue {
  std::uint32_t index = 0;  // >= 1
  std::string type;         // e.g. URL, MAGNET, EMAIL
  std::string data;         // octets, length < 2^32
  std::int64_t timestamp = 0;

  friend bool operator==(const HandleValue&, const HandleValue&) = default;
};

struct HandleRecord {
  std::string prefix;
  std::string suffix;
  std::vector<HandleValue> values;  // ascending index

  [[nodiscard]] std::string pid() const { return prefix + "/" + suffix; }
  [[nodiscard]] const HandleValue* find_type(std::string_view type) const;

  friend bool operator==(const HandleRecord&, const HandleRecord&) = default;
};

/// `prefix/suffix`, with the prefix made of digits and dots and a non-empty
/// suffix without '/'.
struct Pid {
  std::string prefix;
  std::string suffix;

  /// Throws Errc::InvalidPid.
  static Pid parse(std::string_view text);
  [[nodiscard]] std::string str() const { return prefix + "/" + suffix; }
};

bool is_valid_prefix(std::string_view prefix) noexcept;

enum class TargetKind { Magnet, Url };

struct ResolutionResult {
  TargetKind kind = TargetKind::Url;
  std::string target;

  friend bool operator==(const ResolutionResult&, const ResolutionResult&) = default;
};

std::string_view to_string(TargetKind kind) noexcept;

/// Emulated local handle service: prefix routing plus indexed, typed records.
///
/// With a journal path every mutation appends a full record snapshot as one
/// JSON line after a versioned header. Opening replays the journal, drops a
/// torn final line, and rewrites the file in compacted form.
///
/// Readers share the store; writers are serialized. A reader never sees a
/// half-applied update because records are replaced wholesale.
class HandleStore {
 public:
  using Clock = std::function<std::int64_t()>;

  /// In-memory store, nothing persisted.
  HandleStore();
  /// Opens or creates the journal at `journal`. Throws Errc::Journal or Io.
  explicit HandleStore(std::filesystem::path journal);
  ~HandleStore();

  HandleStore(const HandleStore&) = delete;
  HandleStore& operator=(const HandleStore&) = delete;

  /// Replaces the wall clock used for value timestamps.
  void set_clock(Clock clock);

  /// Throws Errc::DuplicatePrefix, or Errc::InvalidPid for a malformed prefix.
  void register_prefix(const std::string& prefix);
  /// Registers unless already present. Returns true when newly registered.
  bool ensure_prefix(const std::string& prefix);
  [[nodiscard]] bool has_prefix(std::string_view prefix) const;

  /// Mints a random UUID-style suffix when `suffix` is empty. Throws
  /// Errc::UnknownPrefix, DuplicateHandle, InvalidValue or InvalidPid.
  HandleRecord create_handle(const std::string& prefix, std::optional<std::string> suffix,
                             std::vector<HandleValue> values);

  /// Replaces values with matching indices and appends the rest. Throws
  /// Errc::NotFound or InvalidValue.
  HandleRecord update_handle(std::string_view pid, std::vector<HandleValue> values);

  /// Throws Errc::NotFound (or InvalidPid).
  [[nodiscard]] HandleRecord get_handle(std::string_view pid) const;
  [[nodiscard]] std::optional<HandleRecord> find_handle(std::string_view pid) const;

  /// MAGNET when present, otherwise URL. Throws Errc::NotFound or NoTarget.
  [[nodiscard]] ResolutionResult resolve_default(std::string_view pid) const;

  [[nodiscard]] std::size_t size() const;
  [[nodiscard]] std::vector<std::string> prefixes() const;

  /// Compacted journal text for the current state (header, prefixes, then
  /// records ordered by pid).
  [[nodiscard]] std::string snapshot() const;

  [[nodiscard]] const std::filesystem::path& path() const noexcept { return path_; }

 private:
  struct FileCloser {
    void operator()(std::FILE* f) const noexcept;
  };

  void replay();
  void compact();
  void append_line(const std::string& line);
  std::string mint_suffix();
  std::int64_t now() const;

  mutable std::shared_mutex mutex_;
  std::set<std::string, std::less<>> prefixes_;
  std::map<std::string, HandleRecord, std::less<>> records_;
  std::filesystem::path path_;
  std::unique_ptr<std::FILE, FileCloser> journal_;
  std::mt19937_64 rng_;
  Clock clock_;
};

/// Checks one record against the value invariants: index >= 1 and unique,
/// non-empty type, data < 2^32 octets, at most one MAGNET and one URL, and
/// MAGNET data must parse as a magnet link. Throws Errc::InvalidValue.
void validate_values(const std::vector<HandleValue>& values);

}  // namespace persistid

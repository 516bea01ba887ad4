#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace persistid {

enum class Errc {
  // magnet
  MissingScheme,
  NoExactTopic,
  MalformedXt,
  BadLength,
  InvalidMagnet,
  // bencode / torrent
  Truncated,
  InvalidPrefix,
  UnsortedKeys,
  LeadingZeroInteger,
  BadInteger,
  TrailingData,
  NoInfoDict,
  MissingName,
  InvalidTorrent,
  // ndn
  EmptyName,
  BadEscape,
  NotRooted,
  MissingField,
  BadChecksumLength,
  OrphanSignature,
  NoNdnEntry,
  InvalidContainer,
  // handle store
  DuplicatePrefix,
  UnknownPrefix,
  DuplicateHandle,
  InvalidValue,
  InvalidPid,
  NotFound,
  NoTarget,
  Journal,
  // transfer model / analysis
  EmptyPlan,
  NonPositiveChunk,
  InvalidArgument,
  EmptyInput,
  Io,
};

std::string_view errc_name(Errc code) noexcept;

/// The single exception type thrown by the library. `code()` identifies the
/// failure class; `what()` carries a human-readable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  [[nodiscard]] Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace persistid

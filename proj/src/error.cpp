#include "persistid/error.hpp"

namespace persistid {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::MissingScheme: return "MissingScheme";
    case Errc::NoExactTopic: return "NoExactTopic";
    case Errc::MalformedXt: return "MalformedXt";
    case Errc::BadLength: return "BadLength";
    case Errc::InvalidMagnet: return "InvalidMagnet";
    case Errc::Truncated: return "Truncated";
    case Errc::InvalidPrefix: return "InvalidPrefix";
    case Errc::UnsortedKeys: return "UnsortedKeys";
    case Errc::LeadingZeroInteger: return "LeadingZeroInteger";
    case Errc::BadInteger: return "BadInteger";
    case Errc::TrailingData: return "TrailingData";
    case Errc::NoInfoDict: return "NoInfoDict";
    case Errc::MissingName: return "MissingName";
    case Errc::InvalidTorrent: return "InvalidTorrent";
    case Errc::EmptyName: return "EmptyName";
    case Errc::BadEscape: return "BadEscape";
    case Errc::NotRooted: return "NotRooted";
    case Errc::MissingField: return "MissingField";
    case Errc::BadChecksumLength: return "BadChecksumLength";
    case Errc::OrphanSignature: return "OrphanSignature";
    case Errc::NoNdnEntry: return "NoNdnEntry";
    case Errc::InvalidContainer: return "InvalidContainer";
    case Errc::DuplicatePrefix: return "DuplicatePrefix";
    case Errc::UnknownPrefix: return "UnknownPrefix";
    case Errc::DuplicateHandle: return "DuplicateHandle";
    case Errc::InvalidValue: return "InvalidValue";
    case Errc::InvalidPid: return "InvalidPid";
    case Errc::NotFound: return "NotFound";
    case Errc::NoTarget: return "NoTarget";
    case Errc::Journal: return "Journal";
    case Errc::EmptyPlan: return "EmptyPlan";
    case Errc::NonPositiveChunk: return "NonPositiveChunk";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace persistid

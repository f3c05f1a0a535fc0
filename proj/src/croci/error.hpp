#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace croci {

// Every failure the engine reports carries one of these codes. The C API
// status values mirror this enum one to one.
enum class ErrorCode {
  kMalformedDoi = 1,
  kMalformedDate,
  kMalformedOrcid,
  kOrcidChecksumFailure,
  kMissingHeader,
  kWrongColumnCount,
  kSelfCitation,
  kMalformedDocument,
  kMissingDoiIdentifier,
  kUnsupportedRelation,
  kMalformedEntry,
  kStorageFailure,
  kWriteFailure,
  kUnknownCitation,
  kRegistryUnavailable,
  kInvalidCounts,
  kInvalidArgument,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace croci

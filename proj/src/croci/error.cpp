#include "croci/error.hpp"

namespace croci {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedDoi: return "MalformedDoi";
    case ErrorCode::kMalformedDate: return "MalformedDate";
    case ErrorCode::kMalformedOrcid: return "MalformedOrcid";
    case ErrorCode::kOrcidChecksumFailure: return "OrcidChecksumFailure";
    case ErrorCode::kMissingHeader: return "MissingHeader";
    case ErrorCode::kWrongColumnCount: return "WrongColumnCount";
    case ErrorCode::kSelfCitation: return "SelfCitation";
    case ErrorCode::kMalformedDocument: return "MalformedDocument";
    case ErrorCode::kMissingDoiIdentifier: return "MissingDoiIdentifier";
    case ErrorCode::kUnsupportedRelation: return "UnsupportedRelation";
    case ErrorCode::kMalformedEntry: return "MalformedEntry";
    case ErrorCode::kStorageFailure: return "StorageFailure";
    case ErrorCode::kWriteFailure: return "WriteFailure";
    case ErrorCode::kUnknownCitation: return "UnknownCitation";
    case ErrorCode::kRegistryUnavailable: return "Unavailable";
    case ErrorCode::kInvalidCounts: return "InvalidCounts";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace croci

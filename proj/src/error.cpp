#include "mintype/error.hpp"

namespace mintype {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::NonConvexPiece: return "NonConvexPiece";
    case ErrorCode::NotLocallyFinite: return "NotLocallyFinite";
    case ErrorCode::DuplicateSite: return "DuplicateSite";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnknownPieceIndex: return "UnknownPieceIndex";
    case ErrorCode::NonPositiveScale: return "NonPositiveScale";
    case ErrorCode::ZeroDirection: return "ZeroDirection";
    case ErrorCode::EmptyGradientList: return "EmptyGradientList";
    case ErrorCode::SubsetTooLarge: return "SubsetTooLarge";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::InconclusiveProfile: return "InconclusiveProfile";
    case ErrorCode::MatchingAmbiguous: return "MatchingAmbiguous";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyFamily:
    case ErrorCode::NonConvexPiece:
    case ErrorCode::NotLocallyFinite:
    case ErrorCode::DuplicateSite:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NonPositiveScale:
      return true;
    default:
      return false;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void raise(ErrorCode code, const std::string& detail) { throw Error(code, detail); }

}  // namespace mintype

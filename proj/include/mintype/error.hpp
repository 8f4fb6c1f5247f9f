#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mintype {

enum class ErrorCode {
  EmptyFamily,
  NonConvexPiece,
  NotLocallyFinite,
  DuplicateSite,
  DimensionMismatch,
  UnknownPieceIndex,
  NonPositiveScale,
  ZeroDirection,
  EmptyGradientList,
  SubsetTooLarge,
  SingularSystem,
  ResolutionTooCoarse,
  InconclusiveProfile,
  MatchingAmbiguous,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(ErrorCode code);

// Validation-class errors map to CLI exit code 2, parse errors to 3.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& detail);

}  // namespace mintype

#include "graphon_ldp/error.h"

namespace graphon_ldp {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kDomain:
      return "domain-error";
    case ErrorCode::kResolutionMismatch:
      return "resolution-mismatch";
    case ErrorCode::kResolutionTooLarge:
      return "resolution-too-large";
    case ErrorCode::kInvalidReference:
      return "invalid-reference";
    case ErrorCode::kDegenerateReference:
      return "degenerate-reference";
    case ErrorCode::kNonConvergence:
      return "non-convergence";
    case ErrorCode::kParse:
      return "parse-error";
    case ErrorCode::kConfig:
      return "config-error";
    case ErrorCode::kIo:
      return "io-error";
  }
  return "unknown";
}

}  // namespace graphon_ldp

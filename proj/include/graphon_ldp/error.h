#ifndef GRAPHON_LDP_ERROR_H_
#define GRAPHON_LDP_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace graphon_ldp {

enum class ErrorCode {
  kInvalidArgument,
  kDomain,
  kResolutionMismatch,
  kResolutionTooLarge,
  kInvalidReference,
  kDegenerateReference,
  kNonConvergence,
  kParse,
  kConfig,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception. The code is
// stable and is what the CLI emits in its machine-readable error JSON.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace graphon_ldp

#endif  // GRAPHON_LDP_ERROR_H_

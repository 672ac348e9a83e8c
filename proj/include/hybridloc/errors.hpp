#ifndef HYBRIDLOC_ERRORS_HPP_
#define HYBRIDLOC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace hybridloc {

/// Stable error categories. The CLI prints the code name in brackets so
/// scripts can grep for a class of failure regardless of message wording.
enum class ErrorCode {
  kConfig,  // invalid scenario / configuration
  kData,    // malformed or inconsistent input data
  kOrder,   // timestamp ordering violated
  kRange,   // argument outside the documented domain
  kFit,     // rank-deficient or failed model fit
  kIo,      // file system failure
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }
  const char* code_name() const { return error_code_name(code_); }

 private:
  ErrorCode code_;
};

inline Error config_error(const std::string& msg) { return Error(ErrorCode::kConfig, msg); }
inline Error data_error(const std::string& msg) { return Error(ErrorCode::kData, msg); }
inline Error order_error(const std::string& msg) { return Error(ErrorCode::kOrder, msg); }
inline Error range_error(const std::string& msg) { return Error(ErrorCode::kRange, msg); }
inline Error fit_error(const std::string& msg) { return Error(ErrorCode::kFit, msg); }
inline Error io_error(const std::string& msg) { return Error(ErrorCode::kIo, msg); }

}  // namespace hybridloc

#endif  // HYBRIDLOC_ERRORS_HPP_

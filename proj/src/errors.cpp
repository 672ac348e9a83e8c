#include "hybridloc/errors.hpp"

namespace hybridloc {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig: return "E_CONFIG";
    case ErrorCode::kData: return "E_DATA";
    case ErrorCode::kOrder: return "E_ORDER";
    case ErrorCode::kRange: return "E_RANGE";
    case ErrorCode::kFit: return "E_FIT";
    case ErrorCode::kIo: return "E_IO";
  }
  return "E_UNKNOWN";
}

}  // namespace hybridloc

#include "mpf/error.hpp"

namespace mpf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidRate: return "invalid-rate";
    case ErrorCode::kInvalidInterval: return "invalid-interval";
    case ErrorCode::kNoValidDimension: return "no-valid-dimension";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kInvalidData: return "invalid-data";
    case ErrorCode::kOutOfDomain: return "out-of-domain";
    case ErrorCode::kDegenerateRegion: return "degenerate-region";
    case ErrorCode::kDegenerateCut: return "degenerate-cut";
    case ErrorCode::kInvalidPoint: return "invalid-point";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kInvalidConfig: return "invalid-config";
    case ErrorCode::kInvalidScript: return "invalid-script";
    case ErrorCode::kParse: return "parse-error";
    case ErrorCode::kTooShort: return "too-short";
    case ErrorCode::kUndefinedAuc: return "undefined-auc";
    case ErrorCode::kUnsupportedDimension: return "unsupported-dimension";
    case ErrorCode::kUsage: return "usage";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

}  // namespace mpf

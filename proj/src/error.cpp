#include "avc/error.h"

namespace avc {

std::string_view category_name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kDimension: return "dimension";
    case ErrorCategory::kDegenerateInput: return "degenerate-input";
    case ErrorCategory::kGeometry: return "geometry";
    case ErrorCategory::kDomain: return "domain";
    case ErrorCategory::kResource: return "resource";
    case ErrorCategory::kValidation: return "validation";
    case ErrorCategory::kIo: return "io";
  }
  return "unknown";
}

}  // namespace avc

#include "rcdlab/error.hpp"

namespace rcdlab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidGeometry: return "invalid-geometry";
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::Dimension: return "dimension";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::InvalidPath: return "invalid-path";
    case ErrorCode::Numerical: return "numerical";
    case ErrorCode::InvalidProfile: return "invalid-profile";
    case ErrorCode::SizeGuard: return "size-guard";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace rcdlab

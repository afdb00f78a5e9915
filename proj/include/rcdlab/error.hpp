#pragma once

#include <stdexcept>
#include <string>

namespace rcdlab {

/// Error categories shared by the C++ core and the C API status codes.
enum class ErrorCode {
  InvalidGeometry = 1,
  InvalidParameter,
  Dimension,
  Domain,
  Precondition,
  InvalidPath,
  Numerical,
  InvalidProfile,
  SizeGuard,
  Config,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

const char* to_string(ErrorCode code) noexcept;

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace rcdlab

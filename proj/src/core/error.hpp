#pragma once

#include <stdexcept>
#include <string>

namespace mbl {

enum class ErrorCode {
  InvalidArgument = 1,
  OutOfRange,
  DimensionMismatch,
  DimensionCap,
  NotHermitian,
  NoConvergence,
  Io,
  CacheCorrupt,
  InsufficientData,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

}  // namespace mbl

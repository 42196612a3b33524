#pragma once

#include <stdexcept>
#include <string>

namespace simclone {

enum class ErrorCode {
  invalid_argument,
  config,
  missing_shim,
  parse,
  synthesis,
  unsupported_type,
  store,
  checksum,
  missing_artifacts,
  pool_mismatch,
  insufficient_data,
  load,
  protocol,
  io,
};

const char* error_code_name(ErrorCode code) noexcept;

// Every failure raised by the core carries one of the codes above; the C API
// maps them one-to-one onto its status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace simclone

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace evb {

enum class ErrorCode {
  kind_mismatch,
  already_packaged,
  header_mismatch,
  empty_dataset,
  unknown_order_key,
  unmapped_metric,
  invalid_model,
  duplicate_id,
  validation_failed,
  not_found,
  unresolved_context,
  unresolved_subject,
  unresolved_result,
  missing_result,
  unexpected_result,
  subject_kind_mismatch,
  io_error,
  parse_failed,
};

std::string_view to_string(ErrorCode code);

// Every recoverable failure in the library is raised as an Error; the code is
// the stable part, the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace evb

#pragma once

#include <stdexcept>
#include <string>

namespace lexseq {

enum class ErrorCode {
  malformed_document,
  duplicate_feature_id,
  unknown_prerequisite,
  invalid_threshold,
  cyclic_model,
  unknown_feature,
  invalid_year,
  invalid_argument,
  out_of_range,
  session_index_mismatch,
  demotion_not_triggered,
  empty_pool,
  no_content,
  plan_result_mismatch,
  not_found,
  already_exists,
  corrupt_record,
  profile_model_mismatch,
  lock_contention,
  io_error,
};

const char* error_code_name(ErrorCode code);

class EngineError : public std::runtime_error {
 public:
  EngineError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw EngineError(code, message);
}

}  // namespace lexseq

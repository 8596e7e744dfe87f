#include "lexseq/errors.hpp"

namespace lexseq {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::malformed_document: return "malformed_document";
    case ErrorCode::duplicate_feature_id: return "duplicate_feature_id";
    case ErrorCode::unknown_prerequisite: return "unknown_prerequisite";
    case ErrorCode::invalid_threshold: return "invalid_threshold";
    case ErrorCode::cyclic_model: return "cyclic_model";
    case ErrorCode::unknown_feature: return "unknown_feature";
    case ErrorCode::invalid_year: return "invalid_year";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::out_of_range: return "out_of_range";
    case ErrorCode::session_index_mismatch: return "session_index_mismatch";
    case ErrorCode::demotion_not_triggered: return "demotion_not_triggered";
    case ErrorCode::empty_pool: return "empty_pool";
    case ErrorCode::no_content: return "no_content";
    case ErrorCode::plan_result_mismatch: return "plan_result_mismatch";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::already_exists: return "already_exists";
    case ErrorCode::corrupt_record: return "corrupt_record";
    case ErrorCode::profile_model_mismatch: return "profile_model_mismatch";
    case ErrorCode::lock_contention: return "lock_contention";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

}  // namespace lexseq

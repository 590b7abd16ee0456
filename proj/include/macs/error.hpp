#pragma once

#include <stdexcept>
#include <string>

namespace macs {

enum class ErrorCode {
  invalid_argument,
  invalid_node,
  invalid_edge,
  not_z_pattern,
  not_m_matrix,
  scaling_not_found,
  synthesis_infeasible,
  numerical_failure,
  invalid_epsilon,
  mode_mismatch,
  invalid_leakage,
  incomplete_neighborhood,
  invalid_model,
  dimension_error,
  divergence_detected,
  structural_assumption_failed,
  insufficient_data,
  schema_error,
  io_error,
};

const char* error_code_name(ErrorCode code);

/// Library-wide exception. Carries a machine-readable code so callers
/// (and the C API) can map failures to statuses without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace macs

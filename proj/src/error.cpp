#include "macs/error.hpp"

namespace macs {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::invalid_node: return "InvalidNode";
    case ErrorCode::invalid_edge: return "InvalidEdge";
    case ErrorCode::not_z_pattern: return "NotZPattern";
    case ErrorCode::not_m_matrix: return "NotMMatrix";
    case ErrorCode::scaling_not_found: return "ScalingNotFound";
    case ErrorCode::synthesis_infeasible: return "SynthesisInfeasible";
    case ErrorCode::numerical_failure: return "NumericalFailure";
    case ErrorCode::invalid_epsilon: return "InvalidEpsilon";
    case ErrorCode::mode_mismatch: return "ModeMismatch";
    case ErrorCode::invalid_leakage: return "InvalidLeakage";
    case ErrorCode::incomplete_neighborhood: return "IncompleteNeighborhood";
    case ErrorCode::invalid_model: return "InvalidModel";
    case ErrorCode::dimension_error: return "DimensionError";
    case ErrorCode::divergence_detected: return "DivergenceDetected";
    case ErrorCode::structural_assumption_failed: return "StructuralAssumptionFailed";
    case ErrorCode::insufficient_data: return "InsufficientData";
    case ErrorCode::schema_error: return "SchemaError";
    case ErrorCode::io_error: return "IoError";
  }
  return "UnknownError";
}

}  // namespace macs

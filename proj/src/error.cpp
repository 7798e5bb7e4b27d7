#include "vstate/error.hpp"

namespace vstate {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::aliasing: return "aliasing";
    case ErrorKind::disallowed_mode: return "disallowed_mode";
    case ErrorKind::near_self_intersection: return "near_self_intersection";
    case ErrorKind::patches_touching: return "patches_touching";
    case ErrorKind::degenerate_normalization: return "degenerate_normalization";
    case ErrorKind::symmetry_violation: return "symmetry_violation";
    case ErrorKind::singular_formulation: return "singular_formulation";
    case ErrorKind::not_converged: return "not_converged";
    case ErrorKind::admissible_set_exit: return "admissible_set_exit";
    case ErrorKind::singular_jacobian: return "singular_jacobian";
    case ErrorKind::winding_nonzero: return "winding_nonzero";
    case ErrorKind::grid_too_coarse: return "grid_too_coarse";
    case ErrorKind::query_too_close: return "query_too_close";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace vstate

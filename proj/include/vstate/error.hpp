#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vstate {

enum class ErrorKind {
  invalid_argument,
  aliasing,
  disallowed_mode,
  near_self_intersection,
  patches_touching,
  degenerate_normalization,
  symmetry_violation,
  singular_formulation,
  not_converged,
  admissible_set_exit,
  singular_jacobian,
  winding_nonzero,
  grid_too_coarse,
  query_too_close,
  config,
  io,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries a machine-readable kind so the
// CLI can map it to an exit code and an error record.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace vstate

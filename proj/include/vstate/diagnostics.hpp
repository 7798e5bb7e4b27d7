#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vstate/boundary.hpp"
#include "vstate/operator.hpp"

namespace vstate {

// Positivity margins of the admissible set, one per blow-up alternative.
struct MonitorVector {
  double minA = 0.0;          // min |A|; +inf at eps = 0 where A is undefined
  double angle_margin = 0.0;  // pi/2 - max |arg(w phi' / phi)|
  double min_phi_prime = 0.0;
  double min_phi = 0.0;
  double separation = 0.0;  // min over node pairs |eps phi(tau) + eps phi(w) + 2l|
  double eps_val = 0.0;

  static constexpr std::array<std::string_view, 6> names{
      "minA", "angle_margin", "min_phi_prime", "min_phi", "separation", "eps"};
  std::array<double, 6> as_array() const noexcept {
    return {minA, angle_margin, min_phi_prime, min_phi, separation, eps_val};
  }
};

struct Diagnostics {
  MonitorVector monitors;
  int winding_A = 0;           // winding of A (of phi' when eps = 0)
  double winding_raw = 0.0;
  double koebe_sup = 0.0;      // max |phi|
  double polar_margin = 0.0;   // min Re(w phi' / phi)
  bool symmetry_ok = false;
  bool omega_bounds_ok = false;
  double speed_excess = 0.0;   // speed minus its point-vortex value
  double residual_recheck = 0.0;  // residual sup norm re-evaluated on 2M nodes
  double truncation = 0.0;        // largest sine mode above N + 1 in the grid residual
  double b1_monitor = 0.0;
  double im_A_dphi = 0.0;      // max |Im(A phi')|; 0 at eps = 0
  std::vector<std::string> notes;  // computations that could not be carried out
};

// Fills every field; failures are recorded in `notes`, never thrown.
Diagnostics compute_diagnostics(const FourierBoundary& b, const SpeedValue& speed, int M) noexcept;

MonitorVector compute_monitors(const FourierBoundary& b, int M, const GridSample* A = nullptr);

// Name of the first admissible-set predicate that fails, if any: the six
// monitors must be positive (minA only when eps > 0), the winding of A zero
// and the samples conjugate symmetric.
std::optional<std::string> admissibility_failure(const Diagnostics& d);

// Omega_0 = 1/(4 pi l^2) (corotating) or V_0 = 1/(4 pi l) (translating).
SpeedValue point_vortex_params(double l, PairKind kind);

// Velocity u = u_x + i u_y induced by both patches (vorticity +-1/(pi eps^2)
// on the right/left patch; both positive for corotating pairs) at query
// points. Throws query_too_close within 1e-6 l of a boundary node.
std::vector<cplx> velocity_field(const FourierBoundary& b, const std::vector<cplx>& queries, int M);

// Same velocity on the right boundary itself, using the limit of the self
// integral at the target node.
std::vector<cplx> boundary_velocity(const FourierBoundary& b, int M);

// Max over the right boundary of |(u - U_frame) . n| / max |u|, where
// U_frame = i Omega z (corotating) or -i V (translating; the right patch is
// the positive one, so the pair moves toward -y).
double steadiness_residual(const FourierBoundary& b, const SpeedValue& speed, int M);

}  // namespace vstate

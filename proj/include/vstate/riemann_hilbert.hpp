#pragma once

#include <vector>

#include "vstate/boundary.hpp"
#include "vstate/operator.hpp"

namespace vstate {

// Scalar Riemann-Hilbert problem Im{a g'} = 0 on the unit circle.
struct RHCoefficient {
  GridSample a;
  // theta = arg(a / conj(a)) = 2 arg a, unwrapped node to node from w = 1
  // with theta(1) = 0.
  std::vector<double> theta;
};

struct Winding {
  int value = 0;
  double raw = 0.0;  // unrounded turn count; distance from an integer flags a coarse grid
};

// Total change of arg a around the standard grid, in turns. Throws
// ErrorKind::invalid_argument when |a| falls below 1e-12 max|a| anywhere.
Winding winding_number(const GridSample& a);

// Builds theta. Throws winding_nonzero, grid_too_coarse (a node-to-node jump of
// theta above pi/2) or symmetry_violation (a(conj w) != conj a(w)).
RHCoefficient make_rh_coefficient(const GridSample& a);

// g0'(w) = exp{(w / 2 pi) oint (theta(tau)/tau - theta(w)/w) / (tau - w) dtau},
// the diagonal replaced by d/dw[theta(w)/w]. Normalized so that the mean over
// the circle (the value at infinity) is 1.
GridSample rh_solve_homogeneous(const RHCoefficient& coef);

// d/dw L^{-1} h for L g = Im{a g'}:
// -(w g0'(w) / pi) oint (q(tau) - q(w)) / (tau - w) dtau, q = h / (a g0' tau).
GridSample rh_inverse(const RHCoefficient& coef, const GridSample& g0_prime,
                      const std::vector<double>& h);
GridSample rh_inverse(const RHCoefficient& coef, const GridSample& g0_prime, const SinSeries& h);

// Im{a g'} node-wise.
std::vector<double> rh_apply(const GridSample& a, const GridSample& g_prime);

// phi from phi' = 1 + sum_{k <= -2} c_k w^k by term-wise integration
// (phi = w + sum c_k w^{k+1} / (k+1)). A w^{-1} term in phi' has no single
// valued primitive and is reported through `residue`.
struct Reconstruction {
  GridSample phi;
  double residue = 0.0;
  double sup = 0.0;  // max_j |phi(w_j)|
};
Reconstruction integrate_trace(const GridSample& dphi);

struct RHCrossCheck {
  Winding winding;
  double max_deviation = 0.0;  // max_j |g0'(w_j) c - phi'(w_j)| with g0'(1) c = phi'(1)
  double koebe_sup = 0.0;      // sup |phi| of the trace rebuilt from g0'
  GridSample g0_prime;
};

// Solves Im{A g'} = 0 with A taken from a solution and compares against the
// spectral phi'. Requires eps > 0.
RHCrossCheck rh_cross_check(const FourierBoundary& b, const SpeedValue& speed, int M);

}  // namespace vstate

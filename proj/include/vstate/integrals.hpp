#pragma once

#include <span>
#include <vector>

#include "vstate/boundary.hpp"

namespace vstate {

// Trapezoidal rule on the unit circle: oint h(tau) dtau ~ sum_j weights_j h(w_j)
// with weights_j = (2 pi i / M) w_j. Exact on tau^k for |k + 1| < M.
struct QuadratureRule {
  int M = 0;
  double offset = 0.0;
  std::vector<cplx> nodes;
  std::vector<cplx> weights;
};

QuadratureRule make_rule(int M, double offset = 0.0);

cplx contour_integral(const QuadratureRule& rule, std::span<const cplx> integrand);

// phi, phi', f, f' sampled on one grid, plus the parameters the kernels need.
struct BoundaryGrid {
  int M = 0;
  double offset = 0.0;
  double eps = 0.0;
  double l = 1.0;
  PairKind kind = PairKind::corotating;
  std::vector<cplx> w;
  std::vector<cplx> phi;
  std::vector<cplx> dphi;
  std::vector<cplx> f;
  std::vector<cplx> df;
};

BoundaryGrid sample_boundary(const FourierBoundary& b, int M, double offset = 0.0);

// Failure thresholds: |phi(tau) - phi(w)| / |tau - w| and
// |eps phi(tau) + eps phi(w) + 2l| / l below these abort the evaluation.
inline constexpr double kSelfIntersectionTol = 1e-8;
inline constexpr double kTouchingTol = 1e-8;

// (1/2 pi i) oint (g(tau) - g(w)) / (phi(tau) - phi(w)) phi'(tau) dtau at every
// node, with the diagonal replaced by its limit g'(w). Sources and targets
// share the grid.
GridSample cauchy_op(const GridSample& phi, const GridSample& dphi, const GridSample& g,
                     const GridSample& dg);

// (1/2 pi i) oint (eps g(tau) + eps g(w) + 2l) / (eps phi(tau) + eps phi(w) + 2l) phi'(tau) dtau.
GridSample interaction_op(const GridSample& phi, const GridSample& dphi, const GridSample& g,
                          double eps, double l);

// The regular kernel J(f, eps)(w) combining self-induction and the mirror
// patch. For translating pairs the mirror patch carries opposite vorticity
// and its term changes sign. Targets share the source grid.
GridSample j_op(const BoundaryGrid& grid);

// Same kernel evaluated at the nodes of a different target grid (e.g. the
// half-shifted one); no diagonal terms arise.
GridSample j_op(const BoundaryGrid& source, const BoundaryGrid& targets);

// Single-threaded reference implementations. Results are bitwise identical to
// the OpenMP versions above: every target node sums its quadrature in the same
// fixed order.
namespace serial {
GridSample cauchy_op(const GridSample& phi, const GridSample& dphi, const GridSample& g,
                     const GridSample& dg);
GridSample interaction_op(const GridSample& phi, const GridSample& dphi, const GridSample& g,
                          double eps, double l);
GridSample j_op(const BoundaryGrid& grid);
GridSample j_op(const BoundaryGrid& source, const BoundaryGrid& targets);
}  // namespace serial

}  // namespace vstate

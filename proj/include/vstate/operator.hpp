#pragma once

#include <vector>

#include "vstate/boundary.hpp"
#include "vstate/integrals.hpp"

namespace vstate {

// Residual in range-space coordinates: b[i] multiplies sin((i + 2) theta), one
// equation per unknown a_{i+1}. The sin(theta) coefficient is cancelled by the
// enslaved speed and kept only as a consistency monitor.
struct SinSeries {
  std::vector<double> b;
  double b1_monitor = 0.0;
  // max |b_m| over the modes m > N + 1 the square system does not see.
  double truncation = 0.0;

  int size() const noexcept { return static_cast<int>(b.size()); }
  double sup_norm() const noexcept;
};

enum class SpeedKind { angular, translational };

struct SpeedValue {
  SpeedKind kind = SpeedKind::angular;
  double value = 0.0;
};

SpeedKind speed_kind_for(PairKind kind) noexcept;

struct ResidualEvaluation {
  SpeedValue speed;
  std::vector<double> grid;  // residual at the standard nodes
  SinSeries series;
  GridSample j;
};

// Full pipeline: sample, J, enslaved speed, grid residual, sine projection.
// Corotating boundaries use the rotating-frame operator F, translating ones G.
ResidualEvaluation evaluate_residual(const FourierBoundary& b, int M);

SinSeries residual_F(const FourierBoundary& b, int M);
SinSeries residual_G(const FourierBoundary& b, int M);

// Ratio of the two contour integrals fixing Omega(f, eps); J precomputed on
// the grid's nodes.
SpeedValue omega_of(const BoundaryGrid& grid, const GridSample& j);
SpeedValue omega_of(const FourierBoundary& b, int M);

// The translation speed V(f, eps): the constant that removes the sin(theta)
// moment of (1/2pi) Im f' + Im[(J + V) w phi'].
SpeedValue speed_V_of(const BoundaryGrid& grid, const GridSample& j);
SpeedValue speed_V_of(const FourierBoundary& b, int M);

SpeedValue speed_of(const FourierBoundary& b, int M);

// A(w) = (C(phi) conj(phi) / (2 pi eps) -+ Ctilde(phi) conj(phi) / (2 pi eps) + frame) w,
// frame = Omega (eps conj(phi) + l) for corotating pairs and -V for translating
// ones. Solutions satisfy Im(A phi') = 0. Undefined at eps = 0.
GridSample A_coefficient(const FourierBoundary& b, const SpeedValue& speed, int M);

}  // namespace vstate

#include "vstate/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vstate/error.hpp"
#include "vstate/spectral.hpp"

namespace vstate {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSymmetryTol = 1e-9;

std::vector<double> sines_of_grid(int M) {
  std::vector<double> s(M);
  for (int j = 0; j < M; ++j) s[j] = std::sin(2.0 * kPi * j / M);
  return s;
}

SinSeries project(const std::vector<double>& r, int n_modes) {
  const int M = static_cast<int>(r.size());
  const int top = M / 2 - 1;

  double scale = 1.0;
  for (double v : r) scale = std::max(scale, std::abs(v));
  const auto cosines = cosine_coefficients(r, top);
  for (double c : cosines) {
    if (std::abs(c) > kSymmetryTol * scale) {
      throw Error(ErrorKind::symmetry_violation, "residual has even (cosine) content: x-axis symmetry lost");
    }
  }

  const auto sines = sine_coefficients(r, top);
  SinSeries out;
  out.b1_monitor = sines[0];
  out.b.assign(sines.begin() + 1, sines.begin() + 1 + n_modes);
  for (int m = n_modes + 2; m <= top; ++m) out.truncation = std::max(out.truncation, std::abs(sines[m - 1]));
  return out;
}

void require_kind(const FourierBoundary& b, PairKind kind, const char* op) {
  if (b.kind() != kind) {
    throw Error(ErrorKind::invalid_argument,
                std::string(op) + " applies to " + std::string(to_string(kind)) + " pairs only");
  }
}

}  // namespace

double SinSeries::sup_norm() const noexcept {
  double m = 0.0;
  for (double v : b) m = std::max(m, std::abs(v));
  return m;
}

SpeedKind speed_kind_for(PairKind kind) noexcept {
  return kind == PairKind::corotating ? SpeedKind::angular : SpeedKind::translational;
}

SpeedValue omega_of(const BoundaryGrid& g, const GridSample& j) {
  const cplx h{0.0, 2.0 * kPi / g.M};
  cplx num{0.0, 0.0};
  cplx den{0.0, 0.0};
  for (int k = 0; k < g.M; ++k) {
    const cplx w = g.w[k];
    const cplx weight = h * w;
    const cplx chord = w - std::conj(w);
    num += weight * j.values[k] * chord * g.dphi[k];
    den += weight * g.dphi[k] * chord * (g.l + g.eps * std::conj(g.phi[k]));
  }
  if (std::abs(den) < 1e-12) {
    throw Error(ErrorKind::degenerate_normalization, "angular velocity normalization integral vanishes");
  }
  const cplx omega = num / den;
  if (std::abs(omega.imag()) > 1e-10) {
    throw Error(ErrorKind::symmetry_violation, "angular velocity has an imaginary part");
  }
  return {SpeedKind::angular, omega.real()};
}

SpeedValue omega_of(const FourierBoundary& b, int M) {
  const auto grid = sample_boundary(b, M);
  return omega_of(grid, j_op(grid));
}

SpeedValue speed_V_of(const BoundaryGrid& g, const GridSample& j) {
  const auto sines = sines_of_grid(g.M);
  double num = 0.0;
  double den = 0.0;
  for (int k = 0; k < g.M; ++k) {
    const cplx wdphi = g.w[k] * g.dphi[k];
    const double base = g.df[k].imag() / (2.0 * kPi) + (j.values[k] * wdphi).imag();
    num += base * sines[k];
    den += wdphi.imag() * sines[k];
  }
  num *= 2.0 / g.M;
  den *= 2.0 / g.M;
  if (std::abs(den) < 1e-12) {
    throw Error(ErrorKind::degenerate_normalization, "translation speed moment vanishes");
  }
  return {SpeedKind::translational, -num / den};
}

SpeedValue speed_V_of(const FourierBoundary& b, int M) {
  const auto grid = sample_boundary(b, M);
  return speed_V_of(grid, j_op(grid));
}

SpeedValue speed_of(const FourierBoundary& b, int M) {
  return b.kind() == PairKind::corotating ? omega_of(b, M) : speed_V_of(b, M);
}

ResidualEvaluation evaluate_residual(const FourierBoundary& b, int M) {
  const auto g = sample_boundary(b, M);
  ResidualEvaluation out;
  out.j = j_op(g);
  out.grid.resize(M);
  if (b.kind() == PairKind::corotating) {
    out.speed = omega_of(g, out.j);
    const double omega = out.speed.value;
    for (int k = 0; k < M; ++k) {
      const cplx bracket = out.j.values[k] - omega * (g.eps * std::conj(g.phi[k]) + g.l);
      out.grid[k] = g.df[k].imag() / (2.0 * kPi) + (bracket * g.w[k] * g.dphi[k]).imag();
    }
  } else {
    out.speed = speed_V_of(g, out.j);
    const double v = out.speed.value;
    for (int k = 0; k < M; ++k) {
      const cplx bracket = out.j.values[k] + v;
      out.grid[k] = g.df[k].imag() / (2.0 * kPi) + (bracket * g.w[k] * g.dphi[k]).imag();
    }
  }
  out.series = project(out.grid, b.n_modes());
  return out;
}

SinSeries residual_F(const FourierBoundary& b, int M) {
  require_kind(b, PairKind::corotating, "residual_F");
  return evaluate_residual(b, M).series;
}

SinSeries residual_G(const FourierBoundary& b, int M) {
  require_kind(b, PairKind::translating, "residual_G");
  return evaluate_residual(b, M).series;
}

GridSample A_coefficient(const FourierBoundary& b, const SpeedValue& speed, int M) {
  if (b.eps() == 0.0) {
    throw Error(ErrorKind::singular_formulation, "A is undefined at eps = 0 (point-vortex limit)");
  }
  if (speed.kind != speed_kind_for(b.kind())) {
    throw Error(ErrorKind::invalid_argument, "speed kind does not match the pair kind");
  }
  const auto g = sample_boundary(b, M);
  GridSample phi{g.phi, 0.0};
  GridSample dphi{g.dphi, 0.0};
  GridSample phibar{std::vector<cplx>(M), 0.0};
  GridSample dphibar{std::vector<cplx>(M), 0.0};
  for (int k = 0; k < M; ++k) {
    phibar.values[k] = std::conj(g.phi[k]);
    // conj(phi) = 1/w + eps f(1/w) on the circle; its w-derivative is -conj(phi') / w^2.
    dphibar.values[k] = -std::conj(g.dphi[k]) / (g.w[k] * g.w[k]);
  }
  const auto self = cauchy_op(phi, dphi, phibar, dphibar);
  const auto mirror = interaction_op(phi, dphi, phibar, g.eps, g.l);
  const double sigma = b.kind() == PairKind::corotating ? 1.0 : -1.0;
  const double scale = 1.0 / (2.0 * kPi * g.eps);

  GridSample a{std::vector<cplx>(M), 0.0};
  for (int k = 0; k < M; ++k) {
    const cplx frame = b.kind() == PairKind::corotating
                           ? speed.value * (g.eps * std::conj(g.phi[k]) + g.l)
                           : cplx{-speed.value, 0.0};
    a.values[k] = (scale * self.values[k] - sigma * scale * mirror.values[k] + frame) * g.w[k];
  }
  return a;
}

}  // namespace vstate

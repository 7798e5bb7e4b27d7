#include "vstate/riemann_hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vstate/error.hpp"
#include "vstate/spectral.hpp"

namespace vstate {

namespace {

constexpr double kPi = std::numbers::pi;

void require_standard_grid(const GridSample& g, const char* op) {
  if (g.offset != 0.0 || g.size() < 4 || g.size() % 2 != 0) {
    throw Error(ErrorKind::invalid_argument, std::string(op) + " needs an even standard grid");
  }
}

// oint (h(tau) - h(w)) / (tau - w) dtau at every node, diagonal h'(w).
std::vector<cplx> difference_quotient_integral(const std::vector<cplx>& h) {
  const int M = static_cast<int>(h.size());
  const GridSample hs{h, 0.0};
  const auto dh = complex_derivative(hs);
  std::vector<cplx> w(M);
  for (int j = 0; j < M; ++j) w[j] = grid_node(M, j);
  const cplx step{0.0, 2.0 * kPi / M};
  std::vector<cplx> out(M);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < M; ++j) {
    cplx acc{0.0, 0.0};
    for (int k = 0; k < M; ++k) {
      const cplx q = k == j ? dh.values[j] : (h[k] - h[j]) / (w[k] - w[j]);
      acc += w[k] * q;
    }
    out[j] = step * acc;
  }
  return out;
}

}  // namespace

Winding winding_number(const GridSample& a) {
  const int M = a.size();
  if (M < 2) throw Error(ErrorKind::invalid_argument, "winding number needs at least two nodes");
  double scale = 0.0;
  for (const auto& v : a.values) scale = std::max(scale, std::abs(v));
  for (const auto& v : a.values) {
    if (!(std::abs(v) > 1e-12 * scale)) {
      throw Error(ErrorKind::invalid_argument, "coefficient vanishes on the grid: winding undefined");
    }
  }
  double turns = 0.0;
  for (int j = 0; j < M; ++j) turns += std::arg(a.values[(j + 1) % M] / a.values[j]);
  turns /= 2.0 * kPi;
  return {static_cast<int>(std::lround(turns)), turns};
}

RHCoefficient make_rh_coefficient(const GridSample& a) {
  require_standard_grid(a, "make_rh_coefficient");
  if (!symmetry_check(a, 1e-9)) {
    throw Error(ErrorKind::symmetry_violation, "RH coefficient lacks a(conj w) = conj a(w)");
  }
  const auto wn = winding_number(a);
  if (wn.value != 0) {
    throw Error(ErrorKind::winding_nonzero,
                "RH coefficient has winding number " + std::to_string(wn.value));
  }
  const int M = a.size();
  RHCoefficient coef{a, std::vector<double>(M, 0.0)};
  for (int j = 0; j + 1 < M; ++j) {
    const double jump = 2.0 * std::arg(a.values[j + 1] / a.values[j]);
    if (std::abs(jump) > kPi / 2) {
      throw Error(ErrorKind::grid_too_coarse, "arg a jumps by more than pi/4 between nodes");
    }
    coef.theta[j + 1] = coef.theta[j] + jump;
  }
  if (std::abs(2.0 * std::arg(a.values[0] / a.values[M - 1])) > kPi / 2) {
    throw Error(ErrorKind::grid_too_coarse, "arg a jumps by more than pi/4 between nodes");
  }
  return coef;
}

GridSample rh_solve_homogeneous(const RHCoefficient& coef) {
  const int M = coef.a.size();
  std::vector<cplx> h(M);
  for (int j = 0; j < M; ++j) h[j] = coef.theta[j] / grid_node(M, j);
  const auto integral = difference_quotient_integral(h);

  GridSample g{std::vector<cplx>(M), 0.0};
  cplx mean{0.0, 0.0};
  for (int j = 0; j < M; ++j) {
    g.values[j] = std::exp(grid_node(M, j) / (2.0 * kPi) * integral[j]);
    mean += g.values[j];
  }
  mean /= static_cast<double>(M);
  for (auto& v : g.values) v /= mean;
  return g;
}

GridSample rh_inverse(const RHCoefficient& coef, const GridSample& g0_prime,
                      const std::vector<double>& h) {
  const int M = coef.a.size();
  if (g0_prime.size() != M || static_cast<int>(h.size()) != M) {
    throw Error(ErrorKind::invalid_argument, "rh_inverse: inputs must share one grid");
  }
  std::vector<cplx> q(M);
  for (int j = 0; j < M; ++j) {
    q[j] = h[j] / (coef.a.values[j] * g0_prime.values[j] * grid_node(M, j));
  }
  const auto integral = difference_quotient_integral(q);
  GridSample out{std::vector<cplx>(M), 0.0};
  for (int j = 0; j < M; ++j) {
    out.values[j] = -grid_node(M, j) * g0_prime.values[j] / kPi * integral[j];
  }
  return out;
}

GridSample rh_inverse(const RHCoefficient& coef, const GridSample& g0_prime, const SinSeries& h) {
  return rh_inverse(coef, g0_prime, synthesize_sines(h.b, 2, coef.a.size()));
}

std::vector<double> rh_apply(const GridSample& a, const GridSample& g_prime) {
  if (a.size() != g_prime.size()) throw Error(ErrorKind::invalid_argument, "rh_apply: grid mismatch");
  std::vector<double> out(a.size());
  for (int j = 0; j < a.size(); ++j) out[j] = (a.values[j] * g_prime.values[j]).imag();
  return out;
}

Reconstruction integrate_trace(const GridSample& dphi) {
  require_standard_grid(dphi, "integrate_trace");
  const int M = dphi.size();
  const auto s = laurent_coefficients(dphi);
  LaurentSeries prim;
  prim.kmin = s.kmin + 1;
  prim.c.assign(s.c.size(), cplx{});
  Reconstruction r;
  for (int k = s.kmin; k < M / 2; ++k) {
    if (k == -1) {
      r.residue = std::abs(s.at(k));
      continue;
    }
    prim.c[k + 1 - prim.kmin] = s.at(k) / static_cast<double>(k + 1);
  }
  r.phi = eval_laurent(prim, M);
  for (const auto& v : r.phi.values) r.sup = std::max(r.sup, std::abs(v));
  return r;
}

RHCrossCheck rh_cross_check(const FourierBoundary& b, const SpeedValue& speed, int M) {
  const auto a = A_coefficient(b, speed, M);
  const auto dphi = eval_phi_prime(b, M);
  RHCrossCheck out;
  out.winding = winding_number(a);
  const auto coef = make_rh_coefficient(a);
  out.g0_prime = rh_solve_homogeneous(coef);
  const cplx c = dphi.values[0] / out.g0_prime.values[0];
  GridSample scaled{std::vector<cplx>(M), 0.0};
  for (int j = 0; j < M; ++j) {
    scaled.values[j] = c * out.g0_prime.values[j];
    out.max_deviation = std::max(out.max_deviation, std::abs(scaled.values[j] - dphi.values[j]));
  }
  out.koebe_sup = integrate_trace(scaled).sup;
  return out;
}

}  // namespace vstate

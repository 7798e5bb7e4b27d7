#include "vstate/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "vstate/error.hpp"
#include "vstate/riemann_hilbert.hpp"

namespace vstate {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double vorticity(const FourierBoundary& b) { return 1.0 / (kPi * b.eps() * b.eps()); }

double mirror_sign(const FourierBoundary& b) { return b.kind() == PairKind::corotating ? 1.0 : -1.0; }

struct Contour {
  std::vector<cplx> z;
  std::vector<cplx> dz;  // dz/dw * (2 pi i / M) w, the trapezoid weight folded in
};

Contour right_contour(const FourierBoundary& b, int M) {
  const auto phi = eval_phi(b, M);
  const auto dphi = eval_phi_prime(b, M);
  Contour c{std::vector<cplx>(M), std::vector<cplx>(M)};
  const cplx h{0.0, 2.0 * kPi / M};
  for (int j = 0; j < M; ++j) {
    c.z[j] = b.eps() * phi.values[j] + b.l();
    c.dz[j] = b.eps() * dphi.values[j] * h * grid_node(M, j);
  }
  return c;
}

// conj(u)(z) = (omega / 4 pi) oint (conj z - conj zeta) / (z - zeta) dzeta
// summed over both boundaries; the left one is the point reflection.
cplx conj_velocity(const Contour& c, cplx z, double omega, double sign, int self_index) {
  cplx self{0.0, 0.0};
  cplx mirror{0.0, 0.0};
  const int M = static_cast<int>(c.z.size());
  for (int k = 0; k < M; ++k) {
    if (k == self_index) {
      self += std::conj(c.dz[k]);
    } else {
      self += std::conj(z - c.z[k]) / (z - c.z[k]) * c.dz[k];
    }
    mirror += std::conj(z + c.z[k]) / (z + c.z[k]) * (-c.dz[k]);
  }
  return omega / (4.0 * kPi) * (self + sign * mirror);
}

template <class Fn>
void note_failure(Diagnostics& d, const char* what, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    d.notes.push_back(std::string(what) + ": " + e.what());
  }
}

}  // namespace

MonitorVector compute_monitors(const FourierBoundary& b, int M, const GridSample* A) {
  const auto g = sample_boundary(b, M);
  MonitorVector m;
  m.eps_val = b.eps();
  m.minA = kInf;
  if (A != nullptr) {
    for (const auto& v : A->values) m.minA = std::min(m.minA, std::abs(v));
  }
  double max_arg = 0.0;
  m.min_phi_prime = kInf;
  m.min_phi = kInf;
  for (int j = 0; j < M; ++j) {
    m.min_phi_prime = std::min(m.min_phi_prime, std::abs(g.dphi[j]));
    m.min_phi = std::min(m.min_phi, std::abs(g.phi[j]));
    if (g.phi[j] == cplx{}) {
      max_arg = kInf;
    } else {
      max_arg = std::max(max_arg, std::abs(std::arg(g.w[j] * g.dphi[j] / g.phi[j])));
    }
  }
  m.angle_margin = kPi / 2 - max_arg;
  // symmetric in (j, k), so half the pairs suffice; squared distances until the end
  double sep2 = kInf;
  for (int j = 0; j < M; ++j) {
    for (int k = j; k < M; ++k) {
      sep2 = std::min(sep2, std::norm(b.eps() * (g.phi[k] + g.phi[j]) + 2.0 * b.l()));
    }
  }
  m.separation = std::sqrt(sep2);
  return m;
}

Diagnostics compute_diagnostics(const FourierBoundary& b, const SpeedValue& speed, int M) noexcept {
  Diagnostics d;
  try {
    std::optional<GridSample> A;
    if (b.eps() > 0.0) {
      note_failure(d, "A", [&] { A = A_coefficient(b, speed, M); });
    }
    note_failure(d, "monitors", [&] { d.monitors = compute_monitors(b, M, A ? &*A : nullptr); });
    if (b.eps() > 0.0 && !A) d.monitors.minA = 0.0;

    note_failure(d, "winding", [&] {
      const auto w = winding_number(A ? *A : eval_phi_prime(b, M));
      d.winding_A = w.value;
      d.winding_raw = w.raw;
    });
    note_failure(d, "geometry", [&] {
      const auto phi = eval_phi(b, M);
      for (const auto& v : phi.values) d.koebe_sup = std::max(d.koebe_sup, std::abs(v));
      d.polar_margin = polar_graph_margin(b, M);
      d.symmetry_ok = symmetry_check(phi) && symmetry_check(eval_phi_prime(b, M)) &&
                      (!A || symmetry_check(*A, 1e-10));
    });
    if (A) {
      const auto dphi = eval_phi_prime(b, M);
      for (int j = 0; j < M; ++j) {
        d.im_A_dphi = std::max(d.im_A_dphi, std::abs((A->values[j] * dphi.values[j]).imag()));
      }
    }

    const double ref = point_vortex_params(b.l(), b.kind()).value;
    d.speed_excess = speed.value - ref;
    if (b.kind() == PairKind::corotating) {
      d.omega_bounds_ok = speed.value > 0.0 &&
                          (b.eps() == 0.0 || speed.value < 1.0 / (2.0 * kPi * b.eps() * b.eps()));
    } else {
      d.omega_bounds_ok = speed.value > 0.0;
    }

    note_failure(d, "residual", [&] {
      const auto series = evaluate_residual(b, M).series;
      d.b1_monitor = series.b1_monitor;
      d.truncation = series.truncation;
    });
    note_failure(d, "residual_recheck",
                 [&] { d.residual_recheck = evaluate_residual(b, 2 * M).series.sup_norm(); });
  } catch (const std::exception& e) {
    d.notes.emplace_back(e.what());
  } catch (...) {
    d.notes.emplace_back("unknown failure");
  }
  return d;
}

std::optional<std::string> admissibility_failure(const Diagnostics& d) {
  const auto values = d.monitors.as_array();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == 5) continue;  // eps = 0 is the admissible trivial point
    if (!(values[i] > 0.0)) return std::string(MonitorVector::names[i]);
  }
  if (!(d.monitors.eps_val >= 0.0)) return std::string("eps");
  if (d.winding_A != 0) return std::string("winding_A");
  if (!d.symmetry_ok) return std::string("symmetry");
  if (!d.notes.empty()) return d.notes.front();
  return std::nullopt;
}

SpeedValue point_vortex_params(double l, PairKind kind) {
  if (!(l > 0.0)) throw Error(ErrorKind::invalid_argument, "l must be positive");
  if (kind == PairKind::corotating) return {SpeedKind::angular, 1.0 / (4.0 * kPi * l * l)};
  return {SpeedKind::translational, 1.0 / (4.0 * kPi * l)};
}

std::vector<cplx> velocity_field(const FourierBoundary& b, const std::vector<cplx>& queries, int M) {
  if (!(b.eps() > 0.0)) throw Error(ErrorKind::singular_formulation, "velocity field needs eps > 0");
  check_resolution(b.n_modes(), M);
  const auto c = right_contour(b, M);
  const double tol = 1e-6 * b.l();
  for (const auto& q : queries) {
    for (const auto& z : c.z) {
      if (std::abs(q - z) < tol || std::abs(q + z) < tol) {
        throw Error(ErrorKind::query_too_close, "query point lies on a patch boundary");
      }
    }
  }
  const double omega = vorticity(b);
  const double sign = mirror_sign(b);
  std::vector<cplx> out(queries.size());
  const int n = static_cast<int>(queries.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) out[i] = std::conj(conj_velocity(c, queries[i], omega, sign, -1));
  return out;
}

std::vector<cplx> boundary_velocity(const FourierBoundary& b, int M) {
  if (!(b.eps() > 0.0)) throw Error(ErrorKind::singular_formulation, "velocity field needs eps > 0");
  check_resolution(b.n_modes(), M);
  const auto c = right_contour(b, M);
  const double omega = vorticity(b);
  const double sign = mirror_sign(b);
  std::vector<cplx> out(M);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < M; ++j) out[j] = std::conj(conj_velocity(c, c.z[j], omega, sign, j));
  return out;
}

double steadiness_residual(const FourierBoundary& b, const SpeedValue& speed, int M) {
  const auto u = boundary_velocity(b, M);
  const auto c = right_contour(b, M);
  double scale = 0.0;
  double worst = 0.0;
  for (int j = 0; j < M; ++j) {
    const cplx frame = b.kind() == PairKind::corotating ? cplx{0.0, speed.value} * c.z[j]
                                                         : cplx{0.0, -speed.value};
    const cplx t = c.dz[j] / std::abs(c.dz[j]);
    worst = std::max(worst, std::abs(((u[j] - frame) * std::conj(t)).imag()));
    scale = std::max(scale, std::abs(u[j]));
  }
  return worst / scale;
}

}  // namespace vstate

#include <doctest.h>

#include "support.hpp"
#include "vstate/diagnostics.hpp"
#include "vstate/error.hpp"
#include "vstate/solver.hpp"

using namespace vstate;
using namespace vstate::test;

namespace {

// Outside a uniform disk of unit circulation the velocity is that of a point
// vortex: u = i Gamma (z - c) / (2 pi |z - c|^2).
cplx point_vortex(cplx z, cplx c, double gamma) { return cplx{0.0, gamma} * (z - c) / (2.0 * pi * std::norm(z - c)); }

}  // namespace

TEST_CASE("point-vortex reference speeds") {
  CHECK(std::abs(point_vortex_params(1.0, PairKind::corotating).value - 0.0795775) < 1e-7);
  CHECK(std::abs(point_vortex_params(2.0, PairKind::corotating).value - 0.0198944) < 1e-7);
  CHECK(point_vortex_params(1.0, PairKind::translating).value == 1.0 / (4.0 * pi));
  CHECK(point_vortex_params(1.0, PairKind::translating).kind == SpeedKind::translational);
  CHECK_THROWS_AS(point_vortex_params(0.0, PairKind::corotating), Error);
}

TEST_CASE("disk pair monitors") {
  const auto b = FourierBoundary::trivial(1.0, 0.1, PairKind::corotating, 8);
  const auto m = compute_monitors(b, 256);
  CHECK(std::abs(m.separation - 1.8) < 1e-14);  // attained at tau = w = -1
  CHECK(std::abs(m.angle_margin - pi / 2) < 1e-14);
  CHECK(std::abs(m.min_phi - 1.0) < 1e-14);
  CHECK(std::abs(m.min_phi_prime - 1.0) < 1e-14);
}

TEST_CASE("trivial diagnostics") {
  const auto b = FourierBoundary::trivial(1.0, 0.0, PairKind::corotating, 8);
  const auto d = compute_diagnostics(b, point_vortex_params(1.0, PairKind::corotating), 64);
  CHECK(d.koebe_sup == 1.0);
  CHECK(d.polar_margin == 1.0);
  CHECK(d.winding_A == 0);
  CHECK(d.symmetry_ok);
  CHECK(d.notes.empty());
  CHECK(std::isinf(d.monitors.minA));
  CHECK_FALSE(admissibility_failure(d).has_value());
}

TEST_CASE("converged small solution is certified") {
  const auto p = newton_solve(FourierBoundary::trivial(1.0, 0.05, PairKind::corotating, 32), {}, 256);
  const auto& d = p.diagnostics;
  CHECK(d.winding_A == 0);
  CHECK(d.koebe_sup <= 4.0);
  CHECK(d.polar_margin > 0.0);
  CHECK(d.symmetry_ok);
  CHECK(d.omega_bounds_ok);
  CHECK(d.im_A_dphi < 1e-8);
  CHECK(std::abs(d.b1_monitor) < 1e-12);
  CHECK_FALSE(admissibility_failure(d).has_value());
  CHECK(steadiness_residual(p.boundary, p.speed, 256) < 1e-6);
  // same input, same record
  const auto again = compute_diagnostics(p.boundary, p.speed, 256);
  CHECK(again.monitors.as_array() == d.monitors.as_array());
  CHECK(again.residual_recheck == d.residual_recheck);
}

TEST_CASE("diagnostics report instead of throwing") {
  const auto b = FourierBoundary::trivial(1.0, 0.2, PairKind::corotating, 8);
  const auto d = compute_diagnostics(b, {SpeedKind::translational, 0.1}, 64);
  CHECK_FALSE(d.notes.empty());
  CHECK(admissibility_failure(d).has_value());
}

TEST_CASE("velocity of two disks matches the point-vortex formula") {
  for (auto kind : {PairKind::corotating, PairKind::translating}) {
    const double sign = kind == PairKind::corotating ? 1.0 : -1.0;
    const auto b = FourierBoundary::trivial(1.0, 0.1, kind, 8);
    const std::vector<cplx> q{{0.0, 0.0}, {0.5, 0.3}, {1.0, 0.2}, {-1.3, -0.4}, {2.0, 1.0}, {0.0, 3.0}};
    const auto u = velocity_field(b, q, 256);
    for (std::size_t i = 0; i < q.size(); ++i) {
      const cplx expect = point_vortex(q[i], 1.0, 1.0) + point_vortex(q[i], -1.0, sign);
      CHECK(std::abs(u[i] - expect) < 1e-10);
    }
  }
}

TEST_CASE("far field and the symmetric point") {
  const auto p = newton_solve(FourierBoundary::trivial(1.0, 0.3, PairKind::corotating, 32), {}, 256);
  const cplx z{600.0, 800.0};  // |z| = 1000 l
  const auto u = velocity_field(p.boundary, {z, cplx{0.0, 0.0}}, 256);
  // total circulation is the summed patch areas times 1/(pi eps^2)
  double area = 0.0;
  for (int n = 1; n <= 32; ++n) area -= n * std::pow(0.3 * p.boundary.coeffs()[n - 1], 2);
  const double gamma = 2.0 * (1.0 + area);
  CHECK(std::abs(std::abs(u[0]) - gamma / (2.0 * pi * 1000.0)) < 1e-6 * gamma / (2.0 * pi * 1000.0) * 10.0);
  CHECK(std::abs(u[1]) < 1e-14);
}

TEST_CASE("queries on a boundary are rejected") {
  const auto b = FourierBoundary::trivial(1.0, 0.1, PairKind::corotating, 8);
  try {
    velocity_field(b, {cplx{1.1, 0.0}}, 64);
    FAIL("query on the boundary accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::query_too_close);
  }
  CHECK_THROWS_AS(velocity_field(FourierBoundary::trivial(1.0, 0.0, PairKind::corotating, 8), {cplx{3.0, 0.0}}, 64),
                  Error);
}

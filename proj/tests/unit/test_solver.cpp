#include <doctest.h>

#include "support.hpp"
#include "vstate/error.hpp"
#include "vstate/solver.hpp"

using namespace vstate;
using namespace vstate::test;

namespace {

double sup_f(const FourierBoundary& b, int M) { return sup_abs(eval_f(b, M).values); }

double sup_distance(const FourierBoundary& a, const FourierBoundary& b) {
  double m = 0.0;
  for (int n = 0; n < a.n_modes(); ++n) m = std::max(m, std::abs(a.coeffs()[n] - b.coeffs()[n]));
  return m;
}

}  // namespace

TEST_CASE("settings validation") {
  NewtonSettings s;
  CHECK_NOTHROW(s.validate());
  s.tol_residual = 0.0;
  CHECK_THROWS_AS(s.validate(), Error);
  s = {};
  s.max_iter = 0;
  CHECK_THROWS_AS(s.validate(), Error);
  s = {};
  s.damping = 1.0;
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("trivial initial guess is returned at once") {
  const auto p = newton_solve(FourierBoundary::trivial(1.0, 0.0, PairKind::corotating, 16), {}, 128);
  CHECK(p.iterations == 0);
  CHECK(p.residual_norm < 1e-13);
  for (double a : p.boundary.coeffs()) CHECK(a == 0.0);
}

TEST_CASE("small-eps solve converges to a small perturbation") {
  const int M = 256;
  const auto p = newton_solve(FourierBoundary::trivial(1.0, 0.05, PairKind::corotating, 32), {}, M);
  CHECK(p.residual_norm < 1e-11);
  CHECK(sup_f(p.boundary, M) < 0.05);
  CHECK(p.speed.value > 0.0);
  CHECK(p.speed.value < 1.0 / (2.0 * pi * 0.05 * 0.05));
  CHECK(std::abs(p.speed.value - 1.0 / (4.0 * pi)) < 1e-6);
  CHECK(p.diagnostics.notes.empty());
  CHECK(p.diagnostics.winding_A == 0);
  // the tail of the residual history contracts quadratically or better
  const auto& h = p.residual_history;
  REQUIRE(h.size() >= 3);
  CHECK(h.back() < h[h.size() - 2] * h[h.size() - 2] / h[h.size() - 3] * 10.0 + 1e-15);
}

TEST_CASE("large eps from a disk guess ends in a typed outcome") {
  try {
    const auto p = newton_solve(FourierBoundary::trivial(1.0, 0.9, PairKind::corotating, 16), {}, 128);
    CHECK(p.residual_norm <= 1e-11);
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::not_converged || e.kind() == ErrorKind::admissible_set_exit ||
           e.kind() == ErrorKind::singular_jacobian));
  }
}

TEST_CASE("local curve: convergence and shrinking f") {
  const int M = 256;
  const auto pts = local_curve(1.0, PairKind::corotating, 32, {0.01, 0.02, 0.03, 0.04, 0.05}, {}, M);
  REQUIRE(pts.size() == 5);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(pts[i].residual_norm < 1e-11);
    if (i > 0) CHECK(sup_f(pts[i - 1].boundary, M) < sup_f(pts[i].boundary, M));
  }
  // |Omega - Omega_0| shrinks with eps
  for (std::size_t i = 1; i < pts.size(); ++i) {
    CHECK(std::abs(pts[i - 1].speed.value - 1.0 / (4.0 * pi)) < std::abs(pts[i].speed.value - 1.0 / (4.0 * pi)));
  }
}

TEST_CASE("local curve argument checks and failure index") {
  CHECK_THROWS_AS(local_curve(1.0, PairKind::corotating, 8, {}, {}, 64), Error);
  CHECK_THROWS_AS(local_curve(1.0, PairKind::corotating, 8, {0.06, 0.07}, {}, 64), Error);
  CHECK_THROWS_AS(local_curve(1.0, PairKind::corotating, 8, {0.02, 0.01}, {}, 64), Error);
  // no corotating state exists near eps = 0.97: the warm start must fail
  try {
    local_curve(1.0, PairKind::corotating, 16, {0.01, 0.97}, {}, 128);
    FAIL("jump across the whole branch converged");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("index 1") != std::string::npos);
  }
}

TEST_CASE("solutions do not depend on the quadrature resolution") {
  const auto p = newton_solve(FourierBoundary::trivial(1.0, 0.05, PairKind::translating, 32), {}, 256);
  CHECK(std::abs(evaluate_residual(p.boundary, 512).series.sup_norm() - p.residual_norm) < 1e-9);
  CHECK(p.diagnostics.residual_recheck < 1e-9);
}

TEST_CASE("uniqueness at small amplitude") {
  const int M = 256;
  const auto p = newton_solve(FourierBoundary::trivial(1.0, 0.03, PairKind::corotating, 32), {}, M);
  std::vector<double> a(p.boundary.coeffs().begin(), p.boundary.coeffs().end());
  for (std::size_t n = 0; n < a.size(); ++n) a[n] += (n % 2 == 0 ? 1e-3 : -1e-3);
  const auto q = newton_solve(p.boundary.with_coeffs(a), {}, M);
  CHECK(sup_distance(p.boundary, q.boundary) < 1e-9);
}

TEST_CASE("eps column of the Jacobian") {
  // forward difference at eps = 0, central otherwise
  const auto b = FourierBoundary::trivial(1.0, 0.0, PairKind::corotating, 8);
  const auto c = jacobian_fd_eps(b, 64, 1e-6);
  CHECK(c.size() == 8);
  // d/d eps of [1/(pi |eps w + 2|^2) - 1/(4 pi)] sin(theta) at eps = 0 is -sin(2 theta) / (8 pi)
  CHECK(std::abs(c(0) + 1.0 / (8.0 * pi)) < 1e-5);
  CHECK(c.tail(7).cwiseAbs().maxCoeff() < 1e-5);
  const auto c2 = jacobian_fd_eps(b.with_eps(0.1), 64, 1e-6);
  CHECK(c2.allFinite());
}

#include <doctest.h>

#include "support.hpp"
#include "vstate/diagnostics.hpp"
#include "vstate/error.hpp"
#include "vstate/integrals.hpp"
#include "vstate/operator.hpp"
#include "vstate/solver.hpp"

using namespace vstate;
using namespace vstate::test;

namespace {

double sup(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("trivial residual vanishes") {
  const auto b = FourierBoundary::trivial(1.0, 0.0, PairKind::corotating, 32);
  const auto ev = evaluate_residual(b, 256);
  CHECK(sup(ev.grid) < 1e-13);
  CHECK(ev.series.sup_norm() < 1e-13);
  CHECK(residual_F(b, 256).sup_norm() < 1e-13);
  CHECK_THROWS_AS(residual_G(b, 256), Error);
}

TEST_CASE("f = 0 residual matches its closed form") {
  const int M = 256;
  for (double l : {1.0, 2.0}) {
    for (double eps : {0.05, 0.1, 0.3}) {
      const auto ev = evaluate_residual(FourierBoundary::trivial(l, eps, PairKind::corotating, 8), M);
      double worst = 0.0;
      for (int j = 0; j < M; ++j) {
        const cplx w = grid_node(M, j);
        const double expect = (2.0 * l / (2.0 * pi * std::norm(eps * w + 2.0 * l)) - l / (4.0 * pi * l * l)) * w.imag();
        worst = std::max(worst, std::abs(ev.grid[j] - expect));
      }
      CHECK(worst < 1e-11);
    }
  }
  const auto ev = evaluate_residual(FourierBoundary::trivial(1.0, 0.1, PairKind::corotating, 8), M);
  CHECK(std::abs(ev.grid[M / 4] - (-1.9845e-4)) < 5e-8);  // theta = pi/2
  CHECK(std::abs(ev.grid[0]) < 1e-15);
}

TEST_CASE("Omega is enslaved to its point-vortex value at f = 0 and at eps = 0") {
  for (double eps : {0.1, 0.3}) {
    const auto s = omega_of(FourierBoundary::trivial(1.0, eps, PairKind::corotating, 8), 128);
    CHECK(s.kind == SpeedKind::angular);
    CHECK(std::abs(s.value - 1.0 / (4.0 * pi)) < 1e-10);
  }
  CHECK(std::abs(omega_of(boundary(1.0, 0.3, {0.0}), 128).value - 0.0795775) < 1e-7);
  // eps = 0 decouples f entirely
  CHECK(std::abs(omega_of(boundary(2.0, 0.0, {0.4, -0.3, 0.1}), 64).value - 1.0 / (16.0 * pi)) < 1e-14);
}

TEST_CASE("translating speed at eps = 0") {
  const auto b = FourierBoundary::trivial(1.0, 0.0, PairKind::translating, 32);
  const auto ev = evaluate_residual(b, 256);
  CHECK(ev.speed.kind == SpeedKind::translational);
  CHECK(std::abs(ev.speed.value - 1.0 / (4.0 * pi)) < 1e-14);
  CHECK(ev.series.sup_norm() < 1e-13);
  CHECK(std::abs(speed_V_of(FourierBoundary::trivial(2.0, 0.0, PairKind::translating, 4), 64).value -
                 0.0397887) < 1e-7);
  CHECK_THROWS_AS(residual_F(b, 256), Error);
}

TEST_CASE("translating residual at eps = 0 reduces to (1/2pi) Im f'") {
  const int M = 64;
  const auto b = boundary(1.0, 0.0, {0.3, -0.2, 0.1}, PairKind::translating);
  const auto ev = evaluate_residual(b, M);
  for (int j = 0; j < M; ++j) {
    const cplx w = grid_node(M, j);
    const cplx df = -0.3 / (w * w) + 2.0 * 0.2 / (w * w * w) - 3.0 * 0.1 / (w * w * w * w);
    CHECK(std::abs(ev.grid[j] - df.imag() / (2.0 * pi)) < 1e-14);
  }
}

TEST_CASE("translating V at f = 0 against a dense moment computation") {
  // J(0, eps) = -(1/2pi) / (eps w + 2l) for the opposite-sign mirror patch, so
  // V = <Im(w / (eps w + 2)) / (2 pi), sin> / <sin, sin>
  const double eps = 0.2;
  const int K = 4096;
  double num = 0.0, den = 0.0;
  for (int j = 0; j < K; ++j) {
    const double t = 2.0 * pi * j / K;
    const cplx w = std::polar(1.0, t);
    num += (w / (eps * w + 2.0)).imag() / (2.0 * pi) * std::sin(t);
    den += std::sin(t) * std::sin(t);
  }
  const auto s = speed_V_of(FourierBoundary::trivial(1.0, eps, PairKind::translating, 8), 256);
  CHECK(std::abs(s.value - num / den) < 1e-13);
}

TEST_CASE("enslaved speed cancels the sin(theta) mode") {
  for (auto kind : {PairKind::corotating, PairKind::translating}) {
    const auto b = boundary(1.0, 0.3, {0.05, -0.02, 0.01, 0.003}, kind);
    CHECK(std::abs(evaluate_residual(b, 128).series.b1_monitor) < 1e-12);
  }
}

TEST_CASE("A coefficient at f = 0 composes the residue oracles") {
  const int M = 256;
  const double eps = 0.1;
  const double omega0 = 1.0 / (4.0 * pi);
  const auto b = FourierBoundary::trivial(1.0, eps, PairKind::corotating, 8);
  const auto A = A_coefficient(b, {SpeedKind::angular, omega0}, M);
  for (int j = 0; j < M; ++j) {
    const cplx w = grid_node(M, j);
    const cplx wb = std::conj(w);
    const cplx expect =
        (-wb / (2.0 * pi * eps) - eps / (eps * w + 2.0) / (2.0 * pi * eps) + omega0 * (eps * wb + 1.0)) * w;
    CHECK(std::abs(A.values[j] - expect) < 1e-11);
  }
  CHECK_THROWS_AS(A_coefficient(FourierBoundary::trivial(1.0, 0.0, PairKind::corotating, 8),
                                {SpeedKind::angular, omega0}, M),
                  Error);
  CHECK_THROWS_AS(A_coefficient(b, {SpeedKind::translational, omega0}, M), Error);
}

TEST_CASE("A and Im(A phi') against the residual") {
  // Im(A phi') = -F node-wise, the identity tying the A-form to the
  // eps-free residual
  const int M = 128;
  for (auto kind : {PairKind::corotating, PairKind::translating}) {
    const auto b = boundary(1.0, 0.25, {0.04, -0.02, 0.006}, kind);
    const auto ev = evaluate_residual(b, M);
    const auto A = A_coefficient(b, ev.speed, M);
    const auto dphi = eval_phi_prime(b, M);
    for (int j = 0; j < M; ++j) CHECK(std::abs((A.values[j] * dphi.values[j]).imag() + ev.grid[j]) < 1e-12);
  }
}

TEST_CASE("linearization at the trivial solution") {
  for (int N : {4, 16}) {
    const auto J = jacobian_fd(FourierBoundary::trivial(1.0, 0.0, PairKind::corotating, N), 256, 1e-6);
    double worst = 0.0;
    for (int r = 0; r < N; ++r) {
      for (int c = 0; c < N; ++c) {
        // unknown a_n feeds sin((n+1) theta) with weight n / (2 pi)
        const double expect = r == c ? (c + 1) / (2.0 * pi) : 0.0;
        worst = std::max(worst, std::abs(J(r, c) - expect));
      }
    }
    CHECK(worst < 1e-6);
    if (N == 4) CHECK(std::abs(J(0, 0) - 0.159155) < 1e-6);
  }
  const auto J32 = jacobian_fd(FourierBoundary::trivial(1.0, 0.0, PairKind::corotating, 32), 256, 1e-6);
  CHECK(std::abs(condition_number(J32) - 32.0) < 1e-4);
}

TEST_CASE("truncation indicator sees modes beyond N + 1") {
  const auto b = boundary(1.0, 0.4, {0.1, 0.05}, PairKind::corotating);
  CHECK(evaluate_residual(b, 64).series.truncation > 1e-8);
  CHECK(evaluate_residual(FourierBoundary::trivial(1.0, 0.0, PairKind::corotating, 4), 64).series.truncation < 1e-15);
}

#include <doctest.h>
#include <omp.h>

#include "support.hpp"
#include "vstate/error.hpp"
#include "vstate/integrals.hpp"

using namespace vstate;
using namespace vstate::test;

namespace {

// phi = id with its derivative, and g = conj(w) = 1/w on the circle with g' = -1/w^2
struct IdentityData {
  GridSample phi, dphi, g, dg;
};

IdentityData identity_data(int M, std::function<cplx(cplx)> g, std::function<cplx(cplx)> dg) {
  return {sample(M, [](cplx w) { return w; }), sample(M, [](cplx) { return cplx{1.0, 0.0}; }), sample(M, g),
          sample(M, dg)};
}

}  // namespace

TEST_CASE("trapezoid rule is exact on monomials") {
  const auto rule = make_rule(16);
  auto integrate = [&](int k) {
    std::vector<cplx> h(16);
    for (int j = 0; j < 16; ++j) h[j] = std::pow(rule.nodes[j], k);
    return contour_integral(rule, h);
  };
  CHECK(std::abs(integrate(-1) - cplx{0.0, 2.0 * pi}) < 1e-14);
  CHECK(std::abs(integrate(0)) < 1e-14);
  CHECK(std::abs(integrate(-5)) < 1e-14);
  for (int k = -15; k <= 14; ++k) {
    if (k == -1) continue;
    CHECK(std::abs(integrate(k)) < 1e-13);
  }
  CHECK_THROWS_AS(contour_integral(rule, std::vector<cplx>(15)), Error);
}

TEST_CASE("cauchy_op residue oracles") {
  const int M = 256;
  // (1/tau - 1/w)/(tau - w) = -1/(tau w): residue gives -1/w = -conj(w)
  auto d = identity_data(M, [](cplx w) { return 1.0 / w; }, [](cplx w) { return -1.0 / (w * w); });
  const auto r = cauchy_op(d.phi, d.dphi, d.g, d.dg);
  for (int j = 0; j < M; ++j) CHECK(std::abs(r.values[j] + std::conj(grid_node(M, j))) < 1e-11);

  d = identity_data(M, [](cplx w) { return w; }, [](cplx) { return cplx{1.0, 0.0}; });
  CHECK(sup_abs(cauchy_op(d.phi, d.dphi, d.g, d.dg).values) < 1e-13);
}

TEST_CASE("cauchy_op against a brute-force refined trapezoid") {
  // g = conj(w)^2; the reference uses 2^20 nodes offset by half a step so
  // that no source node meets a target
  const int M = 64;
  auto d = identity_data(M, [](cplx w) { return 1.0 / (w * w); }, [](cplx w) { return -2.0 / (w * w * w); });
  const auto r = cauchy_op(d.phi, d.dphi, d.g, d.dg);
  const int K = 1 << 20;
  for (int j : {0, 5, 17, 40}) {
    const cplx w = grid_node(M, j);
    cplx acc{0.0, 0.0};
    for (int k = 0; k < K; ++k) {
      const cplx t = std::polar(1.0, 2.0 * pi * (k + 0.5) / K);
      acc += (1.0 / (t * t) - 1.0 / (w * w)) / (t - w) * t;
    }
    acc /= static_cast<double>(K);  // (1/2 pi i) * (2 pi i / K) * sum
    CHECK(std::abs(r.values[j] - acc) < 1e-10);
  }
}

TEST_CASE("interaction_op residue oracles") {
  const int M = 256;
  auto d = identity_data(M, [](cplx w) { return 1.0 / w; }, [](cplx w) { return -1.0 / (w * w); });
  CHECK(sup_abs(interaction_op(d.phi, d.dphi, d.g, 0.0, 1.0).values) < 1e-13);

  const auto r = interaction_op(d.phi, d.dphi, d.g, 0.1, 1.0);
  for (int j = 0; j < M; ++j) {
    const cplx w = grid_node(M, j);
    CHECK(std::abs(r.values[j] - 0.1 / (0.1 * w + 2.0)) < 1e-11);
  }
  CHECK(std::abs(r.values[0] - 0.1 / 2.1) < 1e-11);
  CHECK(std::abs(r.values[0].real() - 0.047619) < 1e-6);
}

TEST_CASE("interaction_op reports touching patches") {
  auto d = identity_data(16, [](cplx w) { return 1.0 / w; }, [](cplx w) { return -1.0 / (w * w); });
  try {
    interaction_op(d.phi, d.dphi, d.g, 1.0, 1.0);  // eps phi + eps phi + 2l vanishes at w = tau = -1
    FAIL("touching not detected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::patches_touching);
  }
}

TEST_CASE("cauchy_op reports near self-intersection") {
  auto d = identity_data(16, [](cplx w) { return w; }, [](cplx) { return cplx{1.0, 0.0}; });
  d.phi.values[3] = d.phi.values[9];
  try {
    cauchy_op(d.phi, d.dphi, d.g, d.dg);
    FAIL("self-intersection not detected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::near_self_intersection);
  }
}

TEST_CASE("j_op closed forms for f = 0") {
  for (double l : {1.0, 2.0}) {
    const auto j0 = j_op(sample_boundary(boundary(l, 0.0, {0.0}), 64));
    for (const auto& v : j0.values) CHECK(std::abs(v - 1.0 / (4.0 * pi * l)) < 1e-14);
  }
  for (double eps : {0.05, 0.2, 0.5}) {
    const int M = 256;
    const auto j = j_op(sample_boundary(boundary(1.0, eps, {0.0}), M));
    for (int k = 0; k < M; ++k) {
      CHECK(std::abs(j.values[k] - 1.0 / (2.0 * pi * (eps * grid_node(M, k) + 2.0))) < 1e-13);
    }
  }
  // w = -1 is node 128 of 256
  const auto j = j_op(sample_boundary(boundary(1.0, 0.2, {0.0}), 256));
  CHECK(std::abs(j.values[128] - 1.0 / (2.0 * pi * 1.8)) < 1e-13);
  CHECK(std::abs(j.values[128].real() - 0.0884194) < 1e-7);
}

TEST_CASE("j_op on a half-shifted target grid matches the closed form") {
  const int M = 128;
  const auto b = boundary(1.0, 0.3, {0.0});
  const auto src = sample_boundary(b, M);
  const auto tgt = sample_boundary(b, M, pi / M);
  const auto j = j_op(src, tgt);
  for (int k = 0; k < M; ++k) {
    CHECK(std::abs(j.values[k] - 1.0 / (2.0 * pi * (0.3 * tgt.w[k] + 2.0))) < 1e-12);
  }
}

TEST_CASE("refinement stability of j_op and cauchy_op") {
  const auto b = boundary(1.0, 0.3, {0.1, -0.05, 0.02});
  const int M = 4 * 4 + 16;
  for (int m : {M, 2 * M}) {
    const auto coarse = j_op(sample_boundary(b, m)).values;
    const auto fine = j_op(sample_boundary(b, 2 * m)).values;
    double diff = 0.0;
    for (int k = 0; k < m; ++k) diff = std::max(diff, std::abs(coarse[k] - fine[2 * k]));
    CHECK(diff < 1e-10);
  }
  auto self = [&](int m) {
    const auto phi = eval_phi(b, m);
    const auto dphi = eval_phi_prime(b, m);
    GridSample g{std::vector<cplx>(m), 0.0}, dg{std::vector<cplx>(m), 0.0};
    for (int k = 0; k < m; ++k) {
      const cplx w = grid_node(m, k);
      g.values[k] = std::conj(phi.values[k]);
      dg.values[k] = -std::conj(dphi.values[k]) / (w * w);
    }
    return cauchy_op(phi, dphi, g, dg).values;
  };
  const auto c1 = self(64);
  const auto c2 = self(128);
  double diff = 0.0;
  for (int k = 0; k < 64; ++k) diff = std::max(diff, std::abs(c1[k] - c2[2 * k]));
  CHECK(diff < 1e-10);
}

TEST_CASE("outputs stay conjugate symmetric") {
  const auto b = boundary(1.0, 0.4, {0.2, -0.1, 0.05});
  CHECK(symmetry_check(j_op(sample_boundary(b, 64)), 1e-14));
  const auto phi = eval_phi(b, 64);
  const auto dphi = eval_phi_prime(b, 64);
  const auto f = eval_f(b, 64);
  const auto df = eval_f_prime(b, 64);
  CHECK(symmetry_check(cauchy_op(phi, dphi, f, df), 1e-13));
  CHECK(symmetry_check(interaction_op(phi, dphi, f, 0.4, 1.0), 1e-13));
}

TEST_CASE("OpenMP kernels agree bitwise with the serial reference") {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(4);
  const auto b = boundary(1.0, 0.35, {0.12, -0.04, 0.02, 0.005}, PairKind::translating);
  const auto grid = sample_boundary(b, 96);
  const auto shifted = sample_boundary(b, 96, pi / 96);
  CHECK(j_op(grid).values == serial::j_op(grid).values);
  CHECK(j_op(grid, shifted).values == serial::j_op(grid, shifted).values);

  const auto phi = eval_phi(b, 96);
  const auto dphi = eval_phi_prime(b, 96);
  const auto f = eval_f(b, 96);
  const auto df = eval_f_prime(b, 96);
  CHECK(cauchy_op(phi, dphi, f, df).values == serial::cauchy_op(phi, dphi, f, df).values);
  CHECK(interaction_op(phi, dphi, f, 0.35, 1.0).values == serial::interaction_op(phi, dphi, f, 0.35, 1.0).values);
  omp_set_num_threads(saved);
}

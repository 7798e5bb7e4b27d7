#pragma once

// Per-target-node quadratures shared by the serial and OpenMP drivers. Each
// function sums over source nodes k = 0..M-1 in ascending order; that fixed
// order is what makes the two drivers agree bit for bit.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "vstate/error.hpp"
#include "vstate/integrals.hpp"

namespace vstate::detail {

enum NodeFlag : unsigned char { kOk = 0, kSelfIntersect = 1, kTouching = 2 };

struct NodeValue {
  cplx value;
  unsigned char flags = kOk;
};

inline constexpr double kPi = std::numbers::pi;

// Plain complex product; operator* on std::complex carries inf/nan recovery
// that the kernels never need.
inline cplx mul(cplx a, cplx b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

inline NodeValue cauchy_node(const std::vector<cplx>& w, const GridSample& phi, const GridSample& dphi,
                             const GridSample& g, const GridSample& dg, int j) {
  const int M = phi.size();
  const cplx pj = phi.values[j];
  const cplx gj = g.values[j];
  const cplx wj = w[j];
  const double tol2 = kSelfIntersectionTol * kSelfIntersectionTol;
  NodeValue out{};
  cplx acc{0.0, 0.0};
  for (int k = 0; k < M; ++k) {
    const cplx xi = w[k];
    if (k == j) {
      acc += xi * dg.values[j];
      continue;
    }
    const cplx d = phi.values[k] - pj;
    const double nd = std::norm(d);
    if (nd < tol2 * std::norm(xi - wj)) out.flags |= kSelfIntersect;
    acc += mul(mul(xi, g.values[k] - gj), mul(std::conj(d), dphi.values[k])) / nd;
  }
  out.value = acc / static_cast<double>(M);
  return out;
}

inline NodeValue interaction_node(const std::vector<cplx>& w, const GridSample& phi,
                                  const GridSample& dphi, const GridSample& g, double eps, double l,
                                  int j) {
  const int M = phi.size();
  const cplx pj = phi.values[j];
  const cplx gj = g.values[j];
  const double tol2 = kTouchingTol * kTouchingTol * l * l;
  NodeValue out{};
  cplx acc{0.0, 0.0};
  for (int k = 0; k < M; ++k) {
    const cplx xi = w[k];
    const cplx den = eps * phi.values[k] + eps * pj + 2.0 * l;
    const double nden = std::norm(den);
    if (nden < tol2) out.flags |= kTouching;
    acc += mul(mul(xi, eps * g.values[k] + eps * gj + 2.0 * l), mul(std::conj(den), dphi.values[k])) / nden;
  }
  out.value = acc / static_cast<double>(M);
  return out;
}

// J at target (w, phi(w), phi'(w), f(w), f'(w)). `diag` is the source index
// coinciding with the target, or -1 when the target is off the source grid.
inline NodeValue j_node(const BoundaryGrid& s, cplx wj, cplx pj, cplx dpj, cplx fj, cplx dfj,
                        int diag) {
  const double self_tol2 = kSelfIntersectionTol * kSelfIntersectionTol;
  const double touch_tol2 = kTouchingTol * kTouchingTol * s.l * s.l;
  const cplx fbar_j = std::conj(fj);
  NodeValue out{};
  cplx s1{0.0, 0.0};
  cplx s2{0.0, 0.0};
  cplx s3{0.0, 0.0};
  for (int k = 0; k < s.M; ++k) {
    const cplx xi = s.w[k];
    cplx k1;
    cplx k2;
    if (k == diag) {
      const cplx t = cplx{0.0, 1.0} * wj * dpj;
      k1 = std::conj(t) / t * dfj;
      k2 = dfj.imag() / (wj * wj * dpj);
    } else {
      const cplx d = pj - s.phi[k];
      const cplx dw = wj - xi;
      const double nd = std::norm(d);
      const double ndw = std::norm(dw);
      if (nd < self_tol2 * ndw || ndw == 0.0) out.flags |= kSelfIntersect;
      // conj(d) / d = conj(d)^2 / |d|^2, written out to avoid the checked complex division
      const cplx cd = std::conj(d);
      k1 = mul(mul(cd, cd), s.df[k]) / nd;
      const double im_x = (dw * (fbar_j - std::conj(s.f[k]))).imag();
      k2 = std::conj(mul(dw, d)) * (im_x / (ndw * nd));
    }
    const cplx den = s.eps * s.phi[k] + s.eps * pj + 2.0 * s.l;
    const double nden = std::norm(den);
    if (nden < touch_tol2) out.flags |= kTouching;
    const cplx k3 = mul(mul(std::conj(s.phi[k]), s.dphi[k]), std::conj(den)) / nden;
    s1 += mul(xi, k1);
    s2 += mul(xi, k2);
    s3 += mul(xi, k3);
  }
  const cplx h{0.0, 2.0 * kPi / s.M};
  const cplx i_4pi2{0.0, 1.0 / (4.0 * kPi * kPi)};
  const double sigma = s.kind == PairKind::corotating ? 1.0 : -1.0;
  out.value = i_4pi2 * h * s1 - h * s2 / (2.0 * kPi * kPi) - sigma * i_4pi2 * h * s3;
  return out;
}

inline void raise_on_flags(const std::vector<NodeValue>& nodes) {
  unsigned char all = kOk;
  for (const auto& n : nodes) all |= n.flags;
  if (all & kTouching) {
    throw Error(ErrorKind::patches_touching, "patch boundaries (nearly) touch: interaction kernel singular");
  }
  if (all & kSelfIntersect) {
    throw Error(ErrorKind::near_self_intersection, "boundary (nearly) self-intersects");
  }
}

template <class NodeFn>
GridSample run_nodes(int M, double offset, NodeFn&& fn, bool parallel) {
  std::vector<NodeValue> nodes(M);
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < M; ++j) nodes[j] = fn(j);
  } else {
    for (int j = 0; j < M; ++j) nodes[j] = fn(j);
  }
  raise_on_flags(nodes);
  GridSample out{std::vector<cplx>(M), offset};
  for (int j = 0; j < M; ++j) out.values[j] = nodes[j].value;
  return out;
}

}  // namespace vstate::detail

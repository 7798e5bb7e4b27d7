#include "vstate/integrals.hpp"

#include <numbers>

#include "kernel_nodes.hpp"
#include "vstate/error.hpp"

namespace vstate {

namespace {

std::vector<cplx> nodes_of(int M, double offset) {
  std::vector<cplx> w(M);
  for (int j = 0; j < M; ++j) w[j] = grid_node(M, j, offset);
  return w;
}

void require_same_grid(const GridSample& a, const GridSample& b, const char* op) {
  if (a.size() != b.size() || a.offset != b.offset) {
    throw Error(ErrorKind::invalid_argument, std::string(op) + ": inputs must share one grid");
  }
}

GridSample cauchy_impl(const GridSample& phi, const GridSample& dphi, const GridSample& g,
                       const GridSample& dg, bool parallel) {
  require_same_grid(phi, dphi, "cauchy_op");
  require_same_grid(phi, g, "cauchy_op");
  require_same_grid(phi, dg, "cauchy_op");
  const auto w = nodes_of(phi.size(), phi.offset);
  return detail::run_nodes(
      phi.size(), phi.offset, [&](int j) { return detail::cauchy_node(w, phi, dphi, g, dg, j); },
      parallel);
}

GridSample interaction_impl(const GridSample& phi, const GridSample& dphi, const GridSample& g,
                            double eps, double l, bool parallel) {
  require_same_grid(phi, dphi, "interaction_op");
  require_same_grid(phi, g, "interaction_op");
  const auto w = nodes_of(phi.size(), phi.offset);
  return detail::run_nodes(
      phi.size(), phi.offset,
      [&](int j) { return detail::interaction_node(w, phi, dphi, g, eps, l, j); }, parallel);
}

GridSample j_impl(const BoundaryGrid& s, const BoundaryGrid& t, bool parallel) {
  if (s.eps != t.eps || s.l != t.l || s.kind != t.kind) {
    throw Error(ErrorKind::invalid_argument, "j_op: source and target describe different boundaries");
  }
  const bool same_grid = s.M == t.M && s.offset == t.offset;
  if (same_grid && s.offset == 0.0 && s.M % 2 == 0) {
    // Real coefficients make J conjugate symmetric on the standard grid:
    // evaluate targets 0..M/2 and reflect.
    const int half = s.M / 2 + 1;
    auto out = detail::run_nodes(
        half, 0.0, [&](int j) { return detail::j_node(s, t.w[j], t.phi[j], t.dphi[j], t.f[j], t.df[j], j); },
        parallel);
    out.values.resize(s.M);
    for (int j = half; j < s.M; ++j) out.values[j] = std::conj(out.values[s.M - j]);
    return out;
  }
  return detail::run_nodes(
      t.M, t.offset,
      [&](int j) {
        return detail::j_node(s, t.w[j], t.phi[j], t.dphi[j], t.f[j], t.df[j], same_grid ? j : -1);
      },
      parallel);
}

}  // namespace

QuadratureRule make_rule(int M, double offset) {
  if (M < 1) throw Error(ErrorKind::invalid_argument, "quadrature rule needs at least one node");
  QuadratureRule rule{M, offset, nodes_of(M, offset), std::vector<cplx>(M)};
  const cplx h{0.0, 2.0 * std::numbers::pi / M};
  for (int j = 0; j < M; ++j) rule.weights[j] = h * rule.nodes[j];
  return rule;
}

cplx contour_integral(const QuadratureRule& rule, std::span<const cplx> integrand) {
  if (static_cast<int>(integrand.size()) != rule.M) {
    throw Error(ErrorKind::invalid_argument, "integrand size does not match the quadrature rule");
  }
  cplx acc{0.0, 0.0};
  for (int j = 0; j < rule.M; ++j) acc += rule.weights[j] * integrand[j];
  return acc;
}

BoundaryGrid sample_boundary(const FourierBoundary& b, int M, double offset) {
  BoundaryGrid g;
  g.M = M;
  g.offset = offset;
  g.eps = b.eps();
  g.l = b.l();
  g.kind = b.kind();
  g.w = nodes_of(M, offset);
  g.phi = eval_phi(b, M, offset).values;
  g.dphi = eval_phi_prime(b, M, offset).values;
  g.f = eval_f(b, M, offset).values;
  g.df = eval_f_prime(b, M, offset).values;
  return g;
}

GridSample cauchy_op(const GridSample& phi, const GridSample& dphi, const GridSample& g,
                     const GridSample& dg) {
  return cauchy_impl(phi, dphi, g, dg, true);
}

GridSample interaction_op(const GridSample& phi, const GridSample& dphi, const GridSample& g,
                          double eps, double l) {
  return interaction_impl(phi, dphi, g, eps, l, true);
}

GridSample j_op(const BoundaryGrid& grid) { return j_impl(grid, grid, true); }

GridSample j_op(const BoundaryGrid& source, const BoundaryGrid& targets) {
  return j_impl(source, targets, true);
}

namespace serial {

GridSample cauchy_op(const GridSample& phi, const GridSample& dphi, const GridSample& g,
                     const GridSample& dg) {
  return cauchy_impl(phi, dphi, g, dg, false);
}

GridSample interaction_op(const GridSample& phi, const GridSample& dphi, const GridSample& g,
                          double eps, double l) {
  return interaction_impl(phi, dphi, g, eps, l, false);
}

GridSample j_op(const BoundaryGrid& grid) { return j_impl(grid, grid, false); }

GridSample j_op(const BoundaryGrid& source, const BoundaryGrid& targets) {
  return j_impl(source, targets, false);
}

}  // namespace serial

}  // namespace vstate

#include "vstate/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "vstate/error.hpp"
#include "vstate/spectral.hpp"

namespace vstate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<cplx> roots_of_unity(int M) {
  std::vector<cplx> roots(M);
  for (int j = 0; j < M; ++j) roots[j] = std::polar(1.0, kTwoPi * j / M);
  return roots;
}

// f and w f' on the grid, both as sums over w^{-n}.
struct SeriesSamples {
  std::vector<cplx> f;
  std::vector<cplx> w_df;
};

SeriesSamples sample_series(const FourierBoundary& b, int M, double offset) {
  check_resolution(b.n_modes(), M);
  const auto roots = roots_of_unity(M);
  const auto a = b.coeffs();
  SeriesSamples out{std::vector<cplx>(M), std::vector<cplx>(M)};
  for (int n = 1; n <= b.n_modes(); ++n) {
    const double an = a[n - 1];
    if (an == 0.0) continue;
    const cplx shift = std::polar(1.0, -n * offset);
    for (int j = 0; j < M; ++j) {
      // w_j^{-n} = exp(-i n (2 pi j / M + offset))
      const long idx = (static_cast<long>(M) - (static_cast<long>(n) * j) % M) % M;
      const cplx wn = roots[idx] * shift;
      out.f[j] += an * wn;
      out.w_df[j] -= static_cast<double>(n) * an * wn;
    }
  }
  return out;
}

}  // namespace

double leftmost_extent(double eps, std::span<const double> coeffs) {
  // x* = -min Re phi on a fine grid; Re phi(e^{it}) = cos t + eps sum a_n cos(n t).
  const int N = static_cast<int>(coeffs.size());
  const int K = std::max(1024, 32 * (N + 1));
  double lo = std::numeric_limits<double>::infinity();
  for (int j = 0; j <= K / 2; ++j) {
    const double t = kTwoPi * j / K;
    const double c1 = std::cos(t);
    double x = c1;
    double prev = 1.0;
    double cur = c1;
    for (int n = 1; n <= N; ++n) {
      x += eps * coeffs[n - 1] * cur;
      const double next = 2.0 * c1 * cur - prev;
      prev = cur;
      cur = next;
    }
    lo = std::min(lo, x);
  }
  return -lo;
}

std::string_view to_string(PairKind kind) {
  return kind == PairKind::corotating ? "corotating" : "translating";
}

PairKind pair_kind_from_string(std::string_view name) {
  if (name == "corotating") return PairKind::corotating;
  if (name == "translating" || name == "counter-rotating") return PairKind::translating;
  throw Error(ErrorKind::invalid_argument, "unknown pair kind '" + std::string(name) + "'");
}

FourierBoundary::FourierBoundary(double l, double eps, PairKind kind, std::vector<double> coeffs)
    : l_(l), eps_(eps), kind_(kind), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error(ErrorKind::invalid_argument, "boundary needs at least one mode");
  if (!(l_ > 0.0) || !std::isfinite(l_)) throw Error(ErrorKind::invalid_argument, "l must be positive");
  if (!(eps_ >= 0.0) || !std::isfinite(eps_)) {
    throw Error(ErrorKind::invalid_argument, "eps must be nonnegative");
  }
  for (double a : coeffs_) {
    if (!std::isfinite(a)) throw Error(ErrorKind::invalid_argument, "non-finite Fourier coefficient");
  }
  if (eps_ > 0.0 && !(eps_ * leftmost_extent(eps_, coeffs_) < l_)) {
    throw Error(ErrorKind::invalid_argument, "patch crosses the symmetry axis (eps x* >= l)");
  }
}

FourierBoundary FourierBoundary::trivial(double l, double eps, PairKind kind, int n_modes) {
  if (n_modes < 1) throw Error(ErrorKind::invalid_argument, "boundary needs at least one mode");
  return FourierBoundary(l, eps, kind, std::vector<double>(n_modes, 0.0));
}

FourierBoundary FourierBoundary::with_coeffs(std::vector<double> coeffs) const {
  return FourierBoundary(l_, eps_, kind_, std::move(coeffs));
}

FourierBoundary FourierBoundary::with_eps(double eps) const {
  return FourierBoundary(l_, eps, kind_, coeffs_);
}

cplx GridSample::node(int j) const { return grid_node(size(), j, offset); }

cplx grid_node(int M, int j, double offset) { return std::polar(1.0, kTwoPi * j / M + offset); }

void check_resolution(int n_modes, int M) {
  if (M <= 0 || M % 2 != 0 || M < 4 * (n_modes + 1)) {
    throw Error(ErrorKind::aliasing, "grid of " + std::to_string(M) + " nodes cannot resolve " +
                                         std::to_string(n_modes) + " modes (need even M >= 4(N+1))");
  }
}

GridSample eval_f(const FourierBoundary& b, int M, double offset) {
  return GridSample{sample_series(b, M, offset).f, offset};
}

GridSample eval_f_prime(const FourierBoundary& b, int M, double offset) {
  auto s = sample_series(b, M, offset);
  GridSample out{std::move(s.w_df), offset};
  for (int j = 0; j < M; ++j) out.values[j] /= grid_node(M, j, offset);
  return out;
}

GridSample eval_phi(const FourierBoundary& b, int M, double offset) {
  auto s = sample_series(b, M, offset);
  GridSample out{std::move(s.f), offset};
  for (int j = 0; j < M; ++j) out.values[j] = grid_node(M, j, offset) + b.eps() * out.values[j];
  return out;
}

GridSample eval_phi_prime(const FourierBoundary& b, int M, double offset) {
  auto s = sample_series(b, M, offset);
  GridSample out{std::move(s.w_df), offset};
  for (int j = 0; j < M; ++j) out.values[j] = 1.0 + b.eps() * out.values[j] / grid_node(M, j, offset);
  return out;
}

std::vector<double> coeffs_from_grid(const GridSample& g, int n_modes, double tol) {
  if (g.offset != 0.0) throw Error(ErrorKind::invalid_argument, "coeffs_from_grid needs the standard grid");
  check_resolution(n_modes, g.size());
  double scale = 0.0;
  for (const auto& v : g.values) scale = std::max(scale, std::abs(v));
  const double bound = tol * std::max(1.0, scale);

  const LaurentSeries s = laurent_coefficients(g);
  std::vector<double> a(n_modes);
  for (int k = s.kmin; k <= s.kmax(); ++k) {
    const cplx c = s.at(k);
    if (k <= -1 && k >= -n_modes) {
      if (std::abs(c.imag()) > bound) {
        throw Error(ErrorKind::disallowed_mode,
                    "imaginary part in mode w^" + std::to_string(k) + " breaks x-axis symmetry");
      }
      a[-k - 1] = c.real();
    } else if (std::abs(c) > bound) {
      throw Error(ErrorKind::disallowed_mode, "energy in disallowed mode w^" + std::to_string(k));
    }
  }
  return a;
}

double polar_graph_margin(const FourierBoundary& b, int M) {
  const auto phi = eval_phi(b, M);
  const auto dphi = eval_phi_prime(b, M);
  double margin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < M; ++j) {
    if (std::abs(phi.values[j]) == 0.0) return -std::numeric_limits<double>::infinity();
    margin = std::min(margin, (grid_node(M, j) * dphi.values[j] / phi.values[j]).real());
  }
  return margin;
}

bool symmetry_check(const GridSample& g, double tol) {
  if (g.offset != 0.0) return false;
  const int M = g.size();
  double scale = 1.0;
  for (const auto& v : g.values) scale = std::max(scale, std::abs(v));
  for (int j = 0; j < M; ++j) {
    const int jc = (M - j) % M;
    if (std::abs(g.values[jc] - std::conj(g.values[j])) > tol * scale) return false;
  }
  return true;
}

bool polar_angle_increasing(const FourierBoundary& b, int M) {
  const auto phi = eval_phi(b, M);
  double prev = std::arg(phi.values[0]);
  for (int j = 1; j <= M; ++j) {
    const double cur = std::arg(phi.values[j % M]);
    double step = std::remainder(cur - prev, kTwoPi);
    if (!(step > 0.0)) return false;
    prev = cur;
  }
  return true;
}

}  // namespace vstate

#pragma once

#include <complex>
#include <span>
#include <string_view>
#include <vector>

namespace vstate {

using cplx = std::complex<double>;

enum class PairKind { corotating, translating };

std::string_view to_string(PairKind kind);
PairKind pair_kind_from_string(std::string_view name);

// Geometric state of one symmetric patch pair. The right patch boundary is
// z = eps * phi(w) + l with phi(w) = w + eps * f(w), f(w) = sum_n a_n w^{-n},
// and the left patch is its point reflection.
class FourierBoundary {
 public:
  // Throws invalid_argument unless l > 0, eps >= 0, coefficients are finite
  // and the patch stays in the right half-plane.
  FourierBoundary(double l, double eps, PairKind kind, std::vector<double> coeffs);

  static FourierBoundary trivial(double l, double eps, PairKind kind, int n_modes);

  double l() const noexcept { return l_; }
  double eps() const noexcept { return eps_; }
  PairKind kind() const noexcept { return kind_; }
  int n_modes() const noexcept { return static_cast<int>(coeffs_.size()); }
  std::span<const double> coeffs() const noexcept { return coeffs_; }

  FourierBoundary with_coeffs(std::vector<double> coeffs) const;
  FourierBoundary with_eps(double eps) const;

  friend bool operator==(const FourierBoundary&, const FourierBoundary&) = default;

 private:
  double l_;
  double eps_;
  PairKind kind_;
  std::vector<double> coeffs_;
};

// x* = -min Re phi over the circle (sampled finely). A boundary with eps > 0
// must satisfy eps x* < l, i.e. the right patch stays off the y-axis.
double leftmost_extent(double eps, std::span<const double> coeffs);

// Samples at w_j = exp(i(2 pi j / M + offset)), j = 0..M-1.
struct GridSample {
  std::vector<cplx> values;
  double offset = 0.0;

  int size() const noexcept { return static_cast<int>(values.size()); }
  cplx node(int j) const;
};

cplx grid_node(int M, int j, double offset = 0.0);

// Throws ErrorKind::aliasing unless M is even and M >= 4(N+1).
void check_resolution(int n_modes, int M);

GridSample eval_phi(const FourierBoundary& b, int M, double offset = 0.0);
GridSample eval_phi_prime(const FourierBoundary& b, int M, double offset = 0.0);
GridSample eval_f(const FourierBoundary& b, int M, double offset = 0.0);
GridSample eval_f_prime(const FourierBoundary& b, int M, double offset = 0.0);

// Recovers a_1..a_N from samples of f on the standard grid. Energy in any
// other Laurent mode, or imaginary coefficient parts, above tol (relative to
// the sample scale) raises ErrorKind::disallowed_mode.
std::vector<double> coeffs_from_grid(const GridSample& g, int n_modes, double tol = 1e-10);

// min_j Re(w_j phi'(w_j) / phi(w_j)); -inf when phi vanishes at a node.
double polar_graph_margin(const FourierBoundary& b, int M);

// True iff g(conj w_j) == conj g(w_j) within tol at every conjugate node pair.
bool symmetry_check(const GridSample& g, double tol = 1e-12);

// True iff j -> arg phi(w_j), unwrapped, is strictly increasing.
bool polar_angle_increasing(const FourierBoundary& b, int M);

}  // namespace vstate

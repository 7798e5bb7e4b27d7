#pragma once

#include <span>
#include <vector>

#include "vstate/boundary.hpp"

namespace vstate {

// Laurent coefficients c_k, k = kmin..kmin+M-1 with kmin = -(M/2 - 1), of a
// function sampled on an M-point grid: g(w) = sum_k c_k w^k. The Nyquist mode
// k = M/2 is kept as the last entry.
struct LaurentSeries {
  int kmin = 0;
  std::vector<cplx> c;

  int kmax() const noexcept { return kmin + static_cast<int>(c.size()) - 1; }
  cplx at(int k) const noexcept;
};

LaurentSeries laurent_coefficients(const GridSample& g);

GridSample eval_laurent(const LaurentSeries& s, int M, double offset = 0.0);

// d/dw of the sampled function, by term-wise differentiation of its Laurent
// series. The Nyquist mode is dropped.
GridSample complex_derivative(const GridSample& g);

// b_m = (2/M) sum_j r_j sin(m theta_j) for m = 1..max_mode (index m-1).
std::vector<double> sine_coefficients(std::span<const double> r, int max_mode);
// Cosine coefficients for m = 0..max_mode (index m), mean first.
std::vector<double> cosine_coefficients(std::span<const double> r, int max_mode);

// Real grid values sum_m b_m sin(m theta_j), b given for m = first_mode, ...
std::vector<double> synthesize_sines(std::span<const double> b, int first_mode, int M);

}  // namespace vstate

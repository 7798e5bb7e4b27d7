#include "vstate/spectral.hpp"

#include <cmath>
#include <numbers>

#include "vstate/error.hpp"

namespace vstate {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

long wrap(long i, long M) { return ((i % M) + M) % M; }

}  // namespace

cplx LaurentSeries::at(int k) const noexcept {
  if (k < kmin || k > kmax()) return {0.0, 0.0};
  return c[k - kmin];
}

LaurentSeries laurent_coefficients(const GridSample& g) {
  const int M = g.size();
  if (M < 2 || M % 2 != 0) throw Error(ErrorKind::invalid_argument, "Laurent transform needs an even grid");
  std::vector<cplx> roots(M);
  for (int j = 0; j < M; ++j) roots[j] = std::polar(1.0, kTwoPi * j / M);

  LaurentSeries s;
  s.kmin = -(M / 2 - 1);
  s.c.resize(M);
  for (int k = s.kmin; k <= M / 2; ++k) {
    cplx acc{0.0, 0.0};
    for (int j = 0; j < M; ++j) acc += g.values[j] * roots[wrap(-static_cast<long>(k) * j, M)];
    s.c[k - s.kmin] = acc * std::polar(1.0 / M, -k * g.offset);
  }
  return s;
}

GridSample eval_laurent(const LaurentSeries& s, int M, double offset) {
  GridSample out{std::vector<cplx>(M), offset};
  for (int j = 0; j < M; ++j) {
    const double theta = kTwoPi * j / M + offset;
    cplx acc{0.0, 0.0};
    for (int k = s.kmin; k <= s.kmax(); ++k) acc += s.at(k) * std::polar(1.0, k * theta);
    out.values[j] = acc;
  }
  return out;
}

GridSample complex_derivative(const GridSample& g) {
  LaurentSeries s = laurent_coefficients(g);
  const int M = g.size();
  LaurentSeries ds;
  ds.kmin = s.kmin - 1;
  ds.c.assign(s.c.size(), cplx{});
  for (int k = s.kmin; k < M / 2; ++k) ds.c[k - 1 - ds.kmin] = static_cast<double>(k) * s.at(k);
  return eval_laurent(ds, M, g.offset);
}

std::vector<double> sine_coefficients(std::span<const double> r, int max_mode) {
  const int M = static_cast<int>(r.size());
  std::vector<double> sines(M);
  for (int j = 0; j < M; ++j) sines[j] = std::sin(kTwoPi * j / M);
  std::vector<double> b(max_mode, 0.0);
  for (int m = 1; m <= max_mode; ++m) {
    double acc = 0.0;
    for (int j = 0; j < M; ++j) acc += r[j] * sines[wrap(static_cast<long>(m) * j, M)];
    b[m - 1] = 2.0 * acc / M;
  }
  return b;
}

std::vector<double> cosine_coefficients(std::span<const double> r, int max_mode) {
  const int M = static_cast<int>(r.size());
  std::vector<double> cosines(M);
  for (int j = 0; j < M; ++j) cosines[j] = std::cos(kTwoPi * j / M);
  std::vector<double> b(max_mode + 1, 0.0);
  for (int m = 0; m <= max_mode; ++m) {
    double acc = 0.0;
    for (int j = 0; j < M; ++j) acc += r[j] * cosines[wrap(static_cast<long>(m) * j, M)];
    b[m] = (m == 0 ? 1.0 : 2.0) * acc / M;
  }
  return b;
}

std::vector<double> synthesize_sines(std::span<const double> b, int first_mode, int M) {
  std::vector<double> sines(M);
  for (int j = 0; j < M; ++j) sines[j] = std::sin(kTwoPi * j / M);
  std::vector<double> r(M, 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const long m = first_mode + static_cast<long>(i);
    for (int j = 0; j < M; ++j) r[j] += b[i] * sines[wrap(m * j, M)];
  }
  return r;
}

}  // namespace vstate

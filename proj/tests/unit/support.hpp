#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "vstate/boundary.hpp"

namespace vstate::test {

inline constexpr double pi = std::numbers::pi;

inline GridSample sample(int M, const std::function<cplx(cplx)>& fn, double offset = 0.0) {
  GridSample g{std::vector<cplx>(M), offset};
  for (int j = 0; j < M; ++j) g.values[j] = fn(grid_node(M, j, offset));
  return g;
}

inline double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
  return m;
}

inline double sup_abs(const std::vector<cplx>& a) {
  double m = 0.0;
  for (const auto& v : a) m = std::max(m, std::abs(v));
  return m;
}

inline FourierBoundary boundary(double l, double eps, std::vector<double> a,
                                PairKind kind = PairKind::corotating) {
  return FourierBoundary(l, eps, kind, std::move(a));
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("vstate_unit_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace vstate::test

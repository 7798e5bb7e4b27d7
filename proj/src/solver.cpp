#include "vstate/solver.hpp"

#include <cmath>
#include <limits>

#include "vstate/error.hpp"
#include "vstate/riemann_hilbert.hpp"

namespace vstate {

namespace {

// Residual at the boundary built by make(); any construction or evaluation
// failure means the perturbation left the admissible set.
template <class Make>
SinSeries residual_or_exit(Make&& make, int M) {
  try {
    return evaluate_residual(make(), M).series;
  } catch (const Error& e) {
    throw Error(ErrorKind::admissible_set_exit, std::string("perturbed point not admissible: ") + e.what());
  }
}

template <class Perturb>
Eigen::VectorXd central_column(int rows, double h, Perturb&& at) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    try {
      const auto rp = at(h);
      const auto rm = at(-h);
      Eigen::VectorXd col(rows);
      for (int i = 0; i < rows; ++i) col(i) = (rp.b[i] - rm.b[i]) / (2.0 * h);
      return col;
    } catch (const Error& e) {
      if (attempt == 1 || e.kind() != ErrorKind::admissible_set_exit) throw;
      h /= 10.0;
    }
  }
  return {};
}

}  // namespace

void NewtonSettings::validate() const {
  if (!(tol_residual > 0.0)) throw Error(ErrorKind::config, "tol_residual must be positive");
  if (max_iter < 1) throw Error(ErrorKind::config, "max_iter must be at least 1");
  if (!(fd_step > 0.0)) throw Error(ErrorKind::config, "fd_step must be positive");
  if (!(damping > 0.0 && damping < 1.0)) throw Error(ErrorKind::config, "damping must lie in (0, 1)");
  if (max_backtracks < 0) throw Error(ErrorKind::config, "max_backtracks must be nonnegative");
}

Eigen::VectorXd residual_vector(const SinSeries& s) {
  Eigen::VectorXd r(s.size());
  for (int i = 0; i < s.size(); ++i) r(i) = s.b[i];
  return r;
}

Eigen::MatrixXd jacobian_fd(const FourierBoundary& b, int M, double h) {
  const int N = b.n_modes();
  Eigen::MatrixXd J(N, N);
  const auto base = b.coeffs();
  for (int n = 0; n < N; ++n) {
    J.col(n) = central_column(N, h, [&](double step) {
      std::vector<double> a(base.begin(), base.end());
      a[n] += step;
      return residual_or_exit([&] { return b.with_coeffs(std::move(a)); }, M);
    });
  }
  return J;
}

Eigen::VectorXd jacobian_fd_eps(const FourierBoundary& b, int M, double h) {
  const int N = b.n_modes();
  if (b.eps() < h) {
    const auto r0 = residual_or_exit([&] { return b; }, M);
    const auto r1 = residual_or_exit([&] { return b.with_eps(b.eps() + h); }, M);
    Eigen::VectorXd col(N);
    for (int i = 0; i < N; ++i) col(i) = (r1.b[i] - r0.b[i]) / h;
    return col;
  }
  return central_column(N, h, [&](double step) { return residual_or_exit([&] { return b.with_eps(b.eps() + step); }, M); });
}

double condition_number(const Eigen::MatrixXd& J) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const auto& s = svd.singularValues();
  if (s.size() == 0) return std::numeric_limits<double>::infinity();
  const double smin = s(s.size() - 1);
  return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

std::optional<std::string> quick_admissibility(const FourierBoundary& b, const SpeedValue& speed, int M) {
  try {
    std::optional<GridSample> A;
    if (b.eps() > 0.0) A = A_coefficient(b, speed, M);
    const auto m = compute_monitors(b, M, A ? &*A : nullptr);
    const auto values = m.as_array();
    for (std::size_t i = 0; i < 5; ++i) {
      if (!(values[i] > 0.0)) return std::string(MonitorVector::names[i]);
    }
    if (A && winding_number(*A).value != 0) return std::string("winding_A");
  } catch (const Error& e) {
    return std::string(to_string(e.kind()));
  }
  return std::nullopt;
}

SolutionPoint finalize_point(const FourierBoundary& b, int M, int iterations, double condition,
                             std::vector<double> history) {
  const auto ev = evaluate_residual(b, M);
  SolutionPoint p{b, ev.speed, ev.series.sup_norm(), {}, condition, M, iterations, std::move(history)};
  p.diagnostics = compute_diagnostics(b, ev.speed, M);
  return p;
}

SolutionPoint newton_solve(const FourierBoundary& initial, const NewtonSettings& settings, int M) {
  settings.validate();
  check_resolution(initial.n_modes(), M);
  const int N = initial.n_modes();

  FourierBoundary b = initial;
  ResidualEvaluation ev;
  try {
    ev = evaluate_residual(b, M);
  } catch (const Error& e) {
    throw Error(ErrorKind::admissible_set_exit, std::string("initial guess not admissible: ") + e.what());
  }
  if (auto bad = quick_admissibility(b, ev.speed, M)) {
    throw Error(ErrorKind::admissible_set_exit, "initial guess not admissible: " + *bad);
  }
  double rnorm = ev.series.sup_norm();
  std::vector<double> history{rnorm};
  double condition = std::numeric_limits<double>::quiet_NaN();

  int it = 0;
  for (; it < settings.max_iter && rnorm > settings.tol_residual; ++it) {
    const Eigen::MatrixXd J = jacobian_fd(b, M, settings.fd_step);
    condition = condition_number(J);
    if (!(condition * settings.min_rcond < 1.0)) {
      throw Error(ErrorKind::singular_jacobian,
                  "Jacobian singular to working precision (condition " + std::to_string(condition) + ")");
    }
    const Eigen::VectorXd dx = J.partialPivLu().solve(-residual_vector(ev.series));

    double lambda = 1.0;
    bool accepted = false;
    std::string last_reason = "no decrease";
    for (int k = 0; k <= settings.max_backtracks; ++k, lambda *= settings.damping) {
      std::vector<double> a(b.coeffs().begin(), b.coeffs().end());
      for (int n = 0; n < N; ++n) a[n] += lambda * dx(n);
      try {
        const auto trial = b.with_coeffs(std::move(a));
        auto tev = evaluate_residual(trial, M);
        if (auto bad = quick_admissibility(trial, tev.speed, M)) {
          last_reason = "left admissible set (" + *bad + ")";
          continue;
        }
        const double tnorm = tev.series.sup_norm();
        if (!(tnorm < rnorm)) continue;
        b = trial;
        ev = std::move(tev);
        rnorm = tnorm;
        accepted = true;
        break;
      } catch (const Error& e) {
        last_reason = std::string("left admissible set (") + e.what() + ")";
      }
    }
    if (!accepted) {
      throw Error(last_reason.rfind("left", 0) == 0 ? ErrorKind::admissible_set_exit : ErrorKind::not_converged,
                  "Newton line search failed: " + last_reason);
    }
    history.push_back(rnorm);
  }
  if (!(rnorm <= settings.tol_residual)) {
    throw Error(ErrorKind::not_converged, "Newton did not converge in " + std::to_string(settings.max_iter) +
                                              " iterations (residual " + std::to_string(rnorm) + ")");
  }
  if (std::isnan(condition)) condition = condition_number(jacobian_fd(b, M, settings.fd_step));
  return finalize_point(b, M, it, condition, std::move(history));
}

std::vector<SolutionPoint> local_curve(double l, PairKind kind, int n_modes, const std::vector<double>& eps_list,
                                       const NewtonSettings& settings, int M) {
  if (eps_list.empty()) throw Error(ErrorKind::invalid_argument, "empty eps list");
  if (eps_list.front() > 0.05 * l) {
    throw Error(ErrorKind::invalid_argument, "local curve must start at eps <= 0.05 l");
  }
  for (std::size_t i = 1; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > eps_list[i - 1])) throw Error(ErrorKind::invalid_argument, "eps list must increase");
  }
  std::vector<SolutionPoint> out;
  auto guess = FourierBoundary::trivial(l, eps_list.front(), kind, n_modes);
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    try {
      out.push_back(newton_solve(guess.with_eps(eps_list[i]), settings, M));
    } catch (const Error& e) {
      throw Error(e.kind(), "local curve failed at index " + std::to_string(i) + " (eps = " +
                                std::to_string(eps_list[i]) + "): " + e.what());
    }
    guess = out.back().boundary;
  }
  return out;
}

}  // namespace vstate

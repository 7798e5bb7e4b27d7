#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vstate/boundary.hpp"
#include "vstate/diagnostics.hpp"
#include "vstate/operator.hpp"

namespace vstate {

struct NewtonSettings {
  double tol_residual = 1e-11;  // sup norm of the projected residual
  int max_iter = 25;
  double fd_step = 1e-6;
  double damping = 0.5;
  int max_backtracks = 10;
  // Reciprocal condition estimate below which the Jacobian counts as singular.
  double min_rcond = 1e-14;

  void validate() const;
};

struct SolutionPoint {
  FourierBoundary boundary;
  SpeedValue speed;
  double residual_norm = 0.0;
  Diagnostics diagnostics;
  double jacobian_condition = 0.0;  // 2-norm condition number of the last Jacobian factored
  int M = 0;
  int iterations = 0;
  std::vector<double> residual_history;  // sup norm before each update and at the end
};

// Central-difference Jacobian of the projected residual with respect to
// a_1..a_N (N x N). A perturbation that leaves the admissible set retries
// once with step h/10 and then raises admissible_set_exit.
Eigen::MatrixXd jacobian_fd(const FourierBoundary& b, int M, double h);

// dR/d eps, central unless eps < h (then forward).
Eigen::VectorXd jacobian_fd_eps(const FourierBoundary& b, int M, double h);

double condition_number(const Eigen::MatrixXd& J);

Eigen::VectorXd residual_vector(const SinSeries& s);

// Name of the first violated admissibility predicate at b, evaluated without
// the full diagnostics record (monitors, winding of A).
std::optional<std::string> quick_admissibility(const FourierBoundary& b, const SpeedValue& speed, int M);

// Damped Newton at fixed eps, unknowns a_1..a_N. Raises not_converged,
// admissible_set_exit or singular_jacobian.
SolutionPoint newton_solve(const FourierBoundary& initial, const NewtonSettings& settings, int M);

// Warm-started solves along an increasing eps list starting at or below
// 0.05 l. The error of the first failing solve is rethrown with its index.
std::vector<SolutionPoint> local_curve(double l, PairKind kind, int n_modes, const std::vector<double>& eps_list,
                                       const NewtonSettings& settings, int M);

// Wraps the converged boundary with its speed, residual and diagnostics.
SolutionPoint finalize_point(const FourierBoundary& b, int M, int iterations, double condition,
                             std::vector<double> history);

}  // namespace vstate

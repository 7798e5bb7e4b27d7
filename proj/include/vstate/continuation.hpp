#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vstate/solver.hpp"

namespace vstate {

enum class Termination { none, monitor_floor, eps_ceiling, max_steps, solver_failure };
std::string_view to_string(Termination t);
Termination termination_from_string(std::string_view name);

struct ContinuationSettings {
  double l = 1.0;
  PairKind kind = PairKind::corotating;
  int n_modes = 32;
  int M = 256;
  double eps_seed = 0.05;
  int seed_points = 5;  // local-curve solves at eps_seed * k / seed_points
  double ds_min = 1e-5;
  double ds_init = 5e-3;
  double ds_max = 2e-2;
  double ds_grow = 1.3;
  int fast_iterations = 3;  // grow ds after a corrector converging in at most this many iterations
  int floor_refinements = 4;
  // Floors on scaled monitors: minA / (Omega_0 l), angle_margin, min|phi'|,
  // min|phi|, separation / l, eps / eps_seed.
  std::array<double, 6> floors{0.05, 0.05, 0.05, 0.05, 0.05, 0.05};
  // Safety ceiling relative to l. Geometry only bounds eps x* < l, where x* is
  // the leftmost extent of phi, so eps itself may exceed l for flattened patches.
  double eps_max = 10.0;
  // A candidate whose residual has sine content above mode N + 1 larger than
  // this is not resolved: the current point is re-solved with 2N modes (M
  // raised to at least 4(2N + 1)) and the step retried, up to max_modes.
  double truncation_tol = 1e-9;
  int max_modes = 128;
  // Same for the quadrature: a candidate whose residual re-evaluated on 2M
  // nodes exceeds this triggers a re-solve on 2M nodes, up to max_nodes.
  double quadrature_tol = 1e-10;
  int max_nodes = 4096;
  int max_steps = 400;
  NewtonSettings newton;

  void validate() const;
};

std::array<double, 6> scaled_monitors(const MonitorVector& m, const ContinuationSettings& s);

// One accepted branch point and the loop state needed to resume after it.
struct BranchEntry {
  SolutionPoint point;
  double s = 0.0;
  double ds = 0.0;       // step that produced this point (0 for seed points)
  double ds_next = 0.0;  // step the loop tries next
  int step = 0;          // arclength steps taken so far; seed points have 0
  int refinements = 0;   // floor refinements used so far
  bool seed = false;
};

struct BranchRecord {
  std::vector<BranchEntry> entries;
  Termination termination = Termination::none;
  std::string monitor;  // offending monitor for monitor_floor
  std::string message;
};

// Unit secant from prev to curr in (a_1..a_N, eps); the shorter coefficient
// list is zero-padded.
Eigen::VectorXd tangent(const SolutionPoint& prev, const SolutionPoint& curr);

// (a_1..a_N, eps), zero-padded to at least n_modes coefficients.
Eigen::VectorXd state_vector(const FourierBoundary& b, int n_modes = 0);
FourierBoundary from_state(const FourierBoundary& like, const Eigen::VectorXd& x);
FourierBoundary with_modes(const FourierBoundary& b, int n_modes);

// Predictor x + ds t, then Newton on {R(x) = 0, t . (x - x_pred) = 0} with
// unknowns (a, eps).
SolutionPoint arclength_step(const SolutionPoint& curr, const Eigen::VectorXd& t, double ds,
                             const NewtonSettings& settings);

// Called after every accepted entry; used for streaming output.
using BranchObserver = std::function<void(const BranchEntry&)>;

// Seeds with the local curve up to eps_seed unless `resume` holds at least two
// entries, in which case the loop picks up after the last one exactly as the
// uninterrupted run would have.
BranchRecord run_continuation(const ContinuationSettings& settings, const std::vector<BranchEntry>& resume = {},
                              const BranchObserver& observer = {});

}  // namespace vstate

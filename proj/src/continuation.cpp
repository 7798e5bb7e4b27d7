#include "vstate/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "vstate/error.hpp"

namespace vstate {

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::none: return "none";
    case Termination::monitor_floor: return "monitor_floor";
    case Termination::eps_ceiling: return "eps_ceiling";
    case Termination::max_steps: return "max_steps";
    case Termination::solver_failure: return "solver_failure";
  }
  return "none";
}

Termination termination_from_string(std::string_view name) {
  for (auto t : {Termination::none, Termination::monitor_floor, Termination::eps_ceiling, Termination::max_steps,
                 Termination::solver_failure}) {
    if (to_string(t) == name) return t;
  }
  throw Error(ErrorKind::io, "unknown termination reason '" + std::string(name) + "'");
}

void ContinuationSettings::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::config, what); };
  if (!(l > 0.0)) fail("l must be positive");
  if (n_modes < 1) fail("N must be at least 1");
  if (M % 2 != 0 || M < 4 * (n_modes + 1)) fail("M must be even and at least 4(N+1)");
  if (!(eps_seed > 0.0 && eps_seed < 0.1 * l)) fail("eps_seed must lie in (0, 0.1 l)");
  if (seed_points < 2) fail("seed_points must be at least 2");
  if (!(ds_min > 0.0 && ds_min <= ds_init && ds_init <= ds_max)) fail("need 0 < ds_min <= ds_init <= ds_max");
  if (!(ds_grow >= 1.0)) fail("ds_grow must be at least 1");
  if (fast_iterations < 0 || floor_refinements < 0) fail("iteration counts must be nonnegative");
  for (double f : floors) {
    if (!(f >= 0.0)) fail("monitor floors must be nonnegative");
  }
  if (!(eps_max > eps_seed / l)) fail("eps_max must exceed eps_seed / l");
  if (!(truncation_tol > 0.0)) fail("truncation_tol must be positive");
  if (max_modes < n_modes) fail("max_modes must be at least N");
  if (!(quadrature_tol > 0.0)) fail("quadrature_tol must be positive");
  if (max_nodes < M) fail("max_nodes must be at least M");
  if (max_steps < 0) fail("max_steps must be nonnegative");
  newton.validate();
}

std::array<double, 6> scaled_monitors(const MonitorVector& m, const ContinuationSettings& s) {
  const double omega0_l = 1.0 / (4.0 * std::numbers::pi * s.l);
  return {m.minA / omega0_l, m.angle_margin, m.min_phi_prime, m.min_phi, m.separation / s.l,
          m.eps_val / s.eps_seed};
}

Eigen::VectorXd state_vector(const FourierBoundary& b, int n_modes) {
  const int N = std::max(b.n_modes(), n_modes);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(N + 1);
  for (int n = 0; n < b.n_modes(); ++n) x(n) = b.coeffs()[n];
  x(N) = b.eps();
  return x;
}

FourierBoundary with_modes(const FourierBoundary& b, int n_modes) {
  std::vector<double> a(b.coeffs().begin(), b.coeffs().end());
  a.resize(n_modes, 0.0);
  return b.with_coeffs(std::move(a));
}

FourierBoundary from_state(const FourierBoundary& like, const Eigen::VectorXd& x) {
  const int N = like.n_modes();
  return FourierBoundary(like.l(), x(N), like.kind(), std::vector<double>(x.data(), x.data() + N));
}

Eigen::VectorXd tangent(const SolutionPoint& prev, const SolutionPoint& curr) {
  const int N = std::max(prev.boundary.n_modes(), curr.boundary.n_modes());
  const Eigen::VectorXd d = state_vector(curr.boundary, N) - state_vector(prev.boundary, N);
  const double norm = d.norm();
  if (!(norm > 0.0)) throw Error(ErrorKind::invalid_argument, "tangent: coincident points");
  return d / norm;
}

SolutionPoint arclength_step(const SolutionPoint& curr, const Eigen::VectorXd& t, double ds,
                             const NewtonSettings& settings) {
  const int M = curr.M;
  const int N = curr.boundary.n_modes();
  if (t.size() != N + 1) throw Error(ErrorKind::invalid_argument, "arclength_step: tangent size mismatch");
  const Eigen::VectorXd xp = state_vector(curr.boundary) + ds * t;

  auto evaluate = [&](const Eigen::VectorXd& x, FourierBoundary& b, ResidualEvaluation& ev) {
    try {
      b = from_state(curr.boundary, x);
      ev = evaluate_residual(b, M);
    } catch (const Error& e) {
      throw Error(ErrorKind::admissible_set_exit, std::string("corrector left admissible set (") + e.what() + ")");
    }
    if (auto bad = quick_admissibility(b, ev.speed, M)) {
      throw Error(ErrorKind::admissible_set_exit, "corrector left admissible set (" + *bad + ")");
    }
    Eigen::VectorXd F(N + 1);
    F.head(N) = residual_vector(ev.series);
    F(N) = t.dot(x - xp);
    return F;
  };

  Eigen::VectorXd x = xp;
  FourierBoundary b = curr.boundary;
  ResidualEvaluation ev;
  Eigen::VectorXd F = evaluate(x, b, ev);
  double fnorm = F.lpNorm<Eigen::Infinity>();
  std::vector<double> history{fnorm};
  double condition = std::numeric_limits<double>::quiet_NaN();

  int it = 0;
  for (; it < settings.max_iter && fnorm > settings.tol_residual; ++it) {
    Eigen::MatrixXd J(N + 1, N + 1);
    J.topLeftCorner(N, N) = jacobian_fd(b, M, settings.fd_step);
    J.topRightCorner(N, 1) = jacobian_fd_eps(b, M, settings.fd_step);
    J.row(N) = t.transpose();
    condition = condition_number(J);
    if (!(condition * settings.min_rcond < 1.0)) {
      throw Error(ErrorKind::singular_jacobian, "bordered Jacobian singular to working precision");
    }
    const Eigen::VectorXd dx = J.partialPivLu().solve(-F);

    double lambda = 1.0;
    bool accepted = false;
    for (int k = 0; k <= settings.max_backtracks; ++k, lambda *= settings.damping) {
      const Eigen::VectorXd trial = x + lambda * dx;
      FourierBoundary tb = b;
      ResidualEvaluation tev;
      try {
        const Eigen::VectorXd tF = evaluate(trial, tb, tev);
        const double tnorm = tF.lpNorm<Eigen::Infinity>();
        if (!(tnorm < fnorm)) continue;
        x = trial;
        b = std::move(tb);
        ev = std::move(tev);
        F = tF;
        fnorm = tnorm;
        accepted = true;
        break;
      } catch (const Error&) {
      }
    }
    if (!accepted) throw Error(ErrorKind::not_converged, "corrector line search failed");
    history.push_back(fnorm);
  }
  if (!(fnorm <= settings.tol_residual)) throw Error(ErrorKind::not_converged, "corrector did not converge");
  if (std::isnan(condition)) {
    Eigen::MatrixXd J(N + 1, N + 1);
    J.topLeftCorner(N, N) = jacobian_fd(b, M, settings.fd_step);
    J.topRightCorner(N, 1) = jacobian_fd_eps(b, M, settings.fd_step);
    J.row(N) = t.transpose();
    condition = condition_number(J);
  }
  return finalize_point(b, M, it, condition, std::move(history));
}

namespace {

double sup_distance(const FourierBoundary& a, const FourierBoundary& b) {
  const int N = std::max(a.n_modes(), b.n_modes());
  return (state_vector(a, N) - state_vector(b, N)).lpNorm<Eigen::Infinity>();
}

// Re-solves p at fixed eps with twice the modes.
// Tangent in (a_1..a_N, eps) with zero coefficients appended up to N modes.
Eigen::VectorXd padded(const Eigen::VectorXd& t, int N) {
  if (t.size() >= N + 1) return t;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(N + 1);
  out.head(t.size() - 1) = t.head(t.size() - 1);
  out(N) = t(t.size() - 1);
  return out;
}

// Re-solves p with N modes on at least M nodes (M kept >= 4(N + 1), multiple of 8).
SolutionPoint upgrade_resolution(const SolutionPoint& p, int N, int M, const NewtonSettings& newton) {
  M = std::max(M, 4 * (N + 1));
  M = (M + 7) / 8 * 8;
  return newton_solve(with_modes(p.boundary, N), newton, M);
}

}  // namespace

BranchRecord run_continuation(const ContinuationSettings& settings, const std::vector<BranchEntry>& resume,
                              const BranchObserver& observer) {
  settings.validate();
  BranchRecord rec;
  auto accept = [&](BranchEntry e) {
    rec.entries.push_back(std::move(e));
    if (observer) observer(rec.entries.back());
  };

  if (resume.size() >= 2) {
    for (const auto& e : resume) rec.entries.push_back(e);
  } else {
    std::vector<double> eps_list;
    for (int k = 1; k <= settings.seed_points; ++k) eps_list.push_back(settings.eps_seed * k / settings.seed_points);
    auto seeds = local_curve(settings.l, settings.kind, settings.n_modes, eps_list, settings.newton, settings.M);
    double s = 0.0;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      if (i > 0) s += (state_vector(seeds[i].boundary) - state_vector(seeds[i - 1].boundary)).norm();
      BranchEntry e{std::move(seeds[i]), s, 0.0, settings.ds_init, 0, 0, true};
      accept(std::move(e));
    }
  }

  const std::size_t n = rec.entries.size();
  SolutionPoint prev = rec.entries[n - 2].point;
  BranchEntry curr = rec.entries[n - 1];
  // curr.point may be re-solved at higher resolution below; the secant keeps
  // using the point as it was accepted and written, so a resumed run replays
  // exactly the same steps.
  SolutionPoint curr_accepted = curr.point;
  double ds = curr.ds_next;
  int refinements = curr.refinements;

  auto finish = [&](Termination t, std::string monitor, std::string message) {
    rec.termination = t;
    rec.monitor = std::move(monitor);
    rec.message = std::move(message);
    return rec;
  };

  while (true) {
    if (curr.step >= settings.max_steps) return finish(Termination::max_steps, "", "step budget exhausted");

    std::string failure;
    std::optional<SolutionPoint> next;
    try {
      const auto t = padded(tangent(prev, curr_accepted), curr.point.boundary.n_modes());
      next = arclength_step(curr.point, t, ds, settings.newton);
      if (sup_distance(next->boundary, curr.point.boundary) > 2.0 * ds) {
        failure = "branch continuity violated";
        next.reset();
      } else if (auto bad = admissibility_failure(next->diagnostics)) {
        failure = "accepted point not admissible (" + *bad + ")";
        next.reset();
      } else if (next->diagnostics.truncation > settings.truncation_tol) {
        if (2 * curr.point.boundary.n_modes() <= settings.max_modes) {
          curr.point = upgrade_resolution(curr.point, 2 * curr.point.boundary.n_modes(), curr.point.M,
                                          settings.newton);
          continue;
        }
        failure = "unresolved at the mode limit (truncation " + std::to_string(next->diagnostics.truncation) + ")";
        next.reset();
      } else if (next->diagnostics.residual_recheck > settings.quadrature_tol) {
        if (2 * curr.point.M <= settings.max_nodes) {
          curr.point = upgrade_resolution(curr.point, curr.point.boundary.n_modes(), 2 * curr.point.M,
                                          settings.newton);
          continue;
        }
        failure = "unresolved at the node limit (recheck " + std::to_string(next->diagnostics.residual_recheck) + ")";
        next.reset();
      }
    } catch (const Error& e) {
      failure = e.what();
    }

    if (!next) {
      ds /= 2.0;
      if (ds < settings.ds_min) return finish(Termination::solver_failure, "", failure);
      continue;
    }

    if (next->boundary.eps() >= settings.eps_max * settings.l) {
      return finish(Termination::eps_ceiling, "eps", "eps reached the ceiling");
    }

    const auto scaled = scaled_monitors(next->diagnostics.monitors, settings);
    int below = -1;
    for (int i = 0; i < 6; ++i) {
      if (scaled[i] < settings.floors[i]) {
        below = i;
        break;
      }
    }
    if (below >= 0) {
      if (refinements < settings.floor_refinements && ds / 2.0 >= settings.ds_min) {
        ++refinements;
        ds /= 2.0;
        continue;
      }
      return finish(Termination::monitor_floor, std::string(MonitorVector::names[below]),
                    "monitor " + std::string(MonitorVector::names[below]) + " reached its floor");
    }

    double ds_next = ds;
    if (refinements == 0 && next->iterations <= settings.fast_iterations) {
      ds_next = std::min(ds * settings.ds_grow, settings.ds_max);
    }
    BranchEntry e{std::move(*next), curr.s + ds, ds, ds_next, curr.step + 1, refinements, false};
    prev = std::move(curr_accepted);
    curr = e;
    curr_accepted = curr.point;
    accept(std::move(e));
    ds = ds_next;
  }
}

}  // namespace vstate

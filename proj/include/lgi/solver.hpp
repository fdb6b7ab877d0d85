#pragma once

// Newton iteration for the discrete flow. Given g, the successor h solves
// F-L(h) = F+L(g) with source(h) = target(g). The unknown is parametrized in
// the source fiber of the current iterate, h <- h * retract(target(h), dtheta, 1),
// so every iterate stays composable with g exactly.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lgi/error.hpp"
#include "lgi/geom.hpp"
#include "lgi/groupoid.hpp"

namespace lgi {

enum class JacobianMode {
  /// Residual and Jacobian both by finite differences of L.
  finite_difference,
  /// Residual from the Lagrangian's closed-form Legendre maps; Jacobian by
  /// differences of that residual.
  model_analytic,
};

struct NewtonConfig {
  int max_iters = 50;
  /// Bound on the infinity norm of the DEL residual.
  double residual_tol = 1e-11;
  /// Step of the first-derivative differences inside the residual.
  double fd_step = 1e-5;
  /// Step of the differences that build the Jacobian in the fiber chart.
  double jacobian_step = 1e-4;
  JacobianMode jacobian_mode = JacobianMode::finite_difference;
  /// Jacobians with a larger condition number are treated as singular.
  double max_condition = 1e12;
  /// Halvings tried when a full step increases the residual.
  int max_damping = 8;

  CalculusConfig calculus() const {
    CalculusConfig c;
    c.fd_step = fd_step;
    c.mode = jacobian_mode == JacobianMode::model_analytic ? DerivativeMode::analytic
                                                           : DerivativeMode::finite_difference;
    return c;
  }
};

struct StepReport {
  int iterations = 0;
  double residual = 0.0;
  /// Tolerance actually enforced: residual_tol, raised in finite-difference
  /// mode to the roundoff floor 2 eps |L| / fd_step of a differenced residual.
  double tolerance = 0.0;
  /// Condition number of the last Jacobian.
  double condition = 0.0;
  /// Residual norm before each iteration and after the last one.
  std::vector<double> residual_history;
};

template <class Element>
struct StepResult {
  Element element;
  StepReport report;
};

namespace detail {

/// Solves F-L(h) = target for h in the source fiber of h_guess.
template <LieGroupoid G>
StepResult<typename G::Element> solve_legendre_minus(
    const G& gr, const DiscreteLagrangian<typename G::Element>& L, const VecX& target,
    typename G::Element h, const NewtonConfig& cfg) {
  if (cfg.max_iters < 1 || !(cfg.residual_tol > 0.0)) {
    throw PreconditionError("NewtonConfig: need max_iters >= 1 and residual_tol > 0");
  }
  const CalculusConfig calc = cfg.calculus();
  const int n = gr.fiber_dim();
  const auto basis = gr.fiber_basis(gr.target(h));
  const auto residual_at = [&](const typename G::Element& e) -> VecX {
    return legendre_minus(gr, L, e, calc).coords - target;
  };
  const auto shifted = [&](const typename G::Element& e, const VecX& theta) {
    return gr.compose(e, gr.retract(gr.target(e), theta, 1.0));
  };

  const auto tolerance_at = [&](const typename G::Element& e) {
    if (calc.mode == DerivativeMode::analytic) return cfg.residual_tol;
    const double floor = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(L(e)) / cfg.fd_step;
    return std::max(cfg.residual_tol, floor);
  };

  StepReport report;
  VecX r = residual_at(h);
  double norm = r.template lpNorm<Eigen::Infinity>();
  report.residual_history.push_back(norm);
  report.tolerance = tolerance_at(h);

  for (int iter = 0; iter < cfg.max_iters && norm > report.tolerance; ++iter) {
    MatX J(n, n);
    const double d = cfg.jacobian_step;
    for (int j = 0; j < n; ++j) {
      const VecX dtheta = d * basis[static_cast<std::size_t>(j)];
      J.col(j) = (residual_at(shifted(h, dtheta)) - residual_at(shifted(h, -dtheta))) / (2.0 * d);
    }
    report.condition = condition_number(J);
    // Entries of J carry the residual's noise divided by the difference step;
    // a smallest singular value below that level is indistinguishable from 0.
    const double noise = 10.0 * report.tolerance / d;
    if (n > 0 && !(J.jacobiSvd().singularValues()(n - 1) > noise)) {
      report.condition = std::numeric_limits<double>::infinity();
    }
    if (!(report.condition <= cfg.max_condition)) {
      std::ostringstream msg;
      msg << "Newton Jacobian is singular (condition " << report.condition
          << "); the Lagrangian is not regular here";
      throw SingularJacobian(msg.str(), report.condition);
    }
    const VecX step = -J.fullPivLu().solve(r);

    // Simple damping: halve the step while the residual grows.
    double scale = 1.0;
    auto candidate = shifted(h, step);
    VecX r_new = residual_at(candidate);
    double norm_new = r_new.template lpNorm<Eigen::Infinity>();
    for (int k = 0; k < cfg.max_damping && norm_new > norm; ++k) {
      scale *= 0.5;
      candidate = shifted(h, scale * step);
      r_new = residual_at(candidate);
      norm_new = r_new.template lpNorm<Eigen::Infinity>();
    }
    h = std::move(candidate);
    r = std::move(r_new);
    norm = norm_new;
    report.iterations = iter + 1;
    report.residual_history.push_back(norm);
    report.tolerance = tolerance_at(h);
  }
  report.residual = norm;
  if (!(norm <= report.tolerance)) {
    std::ostringstream msg;
    msg << "Newton did not reach residual " << report.tolerance << " in " << report.iterations
        << " iterations (residual " << norm << ")";
    throw MaxItersExceeded(msg.str(), report.iterations, norm);
  }
  return {std::move(h), std::move(report)};
}

}  // namespace detail

/// One step of the discrete Lagrangian evolution operator: returns h with
/// source(h) = target(g) and |D_DEL L(g, h)|_inf <= report.tolerance.
/// Throws ContractViolation when h_guess is not composable with g,
/// SingularJacobian at a non-regular iterate and MaxItersExceeded when the
/// residual stalls.
template <LieGroupoid G>
StepResult<typename G::Element> evolve_step(const G& gr,
                                            const DiscreteLagrangian<typename G::Element>& L,
                                            const typename G::Element& g,
                                            const typename G::Element& h_guess,
                                            const NewtonConfig& cfg = {}) {
  require_composable(gr, g, h_guess);
  const VecX target = legendre_plus(gr, L, g, cfg.calculus()).coords;
  return detail::solve_legendre_minus(gr, L, target, h_guess, cfg);
}

/// Inverse of F-L near h_guess: returns h with F-L(h) = mu.
template <LieGroupoid G>
StepResult<typename G::Element> invert_legendre_minus(
    const G& gr, const DiscreteLagrangian<typename G::Element>& L,
    const Momentum<typename G::Base>& mu, const typename G::Element& h_guess,
    const NewtonConfig& cfg = {}) {
  if (!(gr.base_distance(mu.base, gr.source(h_guess)) <= kComposableTol)) {
    throw ContractViolation("invert_legendre_minus: guess is not based at the momentum's point");
  }
  return detail::solve_legendre_minus(gr, L, mu.coords, h_guess, cfg);
}

/// Discrete Hamiltonian evolution F+L o (F-L)^-1, seeded with h_guess.
template <LieGroupoid G>
Momentum<typename G::Base> hamiltonian_step(const G& gr,
                                            const DiscreteLagrangian<typename G::Element>& L,
                                            const Momentum<typename G::Base>& mu,
                                            const typename G::Element& h_guess,
                                            const NewtonConfig& cfg = {}) {
  const auto h = invert_legendre_minus(gr, L, mu, h_guess, cfg).element;
  return legendre_plus(gr, L, h, cfg.calculus());
}

template <class Element>
struct Trajectory {
  /// g_0, ..., g_N; consecutive elements are composable.
  std::vector<Element> elements;
  /// reports[k] describes the solve that produced elements[k + 1].
  std::vector<StepReport> reports;
};

/// Successor guess for g: the groupoid's constant-velocity extrapolation when
/// it has one, the identity at target(g) otherwise.
template <LieGroupoid G>
typename G::Element default_guess(const G& gr, const typename G::Element& g) {
  if constexpr (Extrapolating<G>) {
    return gr.extrapolate(g);
  } else {
    return gr.identity(gr.target(g));
  }
}

/// Runs N steps of the discrete flow from g0. Step errors are rethrown as
/// StepFailure carrying the 1-based step index.
template <LieGroupoid G>
Trajectory<typename G::Element> run_trajectory(
    const G& gr, const DiscreteLagrangian<typename G::Element>& L, const typename G::Element& g0,
    std::size_t steps, const NewtonConfig& cfg = {},
    const std::optional<typename G::Element>& first_guess = std::nullopt) {
  Trajectory<typename G::Element> traj;
  traj.elements.reserve(steps + 1);
  traj.reports.reserve(steps);
  traj.elements.push_back(g0);
  for (std::size_t k = 0; k < steps; ++k) {
    const auto& g = traj.elements.back();
    const auto guess = (k == 0 && first_guess) ? *first_guess : default_guess(gr, g);
    try {
      auto result = evolve_step(gr, L, g, guess, cfg);
      traj.elements.push_back(std::move(result.element));
      traj.reports.push_back(std::move(result.report));
    } catch (const Error& err) {
      std::ostringstream msg;
      msg << "step " << (k + 1) << ": " << err.what();
      throw StepFailure(msg.str(), k + 1);
    }
  }
  return traj;
}

}  // namespace lgi

#pragma once

// Numerical certificates for the structure a discrete flow on a groupoid is
// supposed to preserve: Noether constants, the Poincare-Cartan 2-section and
// compatibility with reduction morphisms.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <tuple>
#include <vector>

#include "lgi/error.hpp"
#include "lgi/geom.hpp"
#include "lgi/groupoid.hpp"

namespace lgi {

/// A section X of the algebroid and a gauge f with dL(X^(1,1)) = beta*f - alpha*f.
/// An empty gauge means f = 0 (strict invariance).
template <class Base>
struct NoetherSymmetry {
  std::function<VecX(const Base&)> section;
  std::function<double(const Base&)> gauge;

  double f(const Base& x) const { return gauge ? gauge(x) : 0.0; }
};

/// max over samples of |-->X(g)L + <-X(g)L - f(target g) + f(source g)|.
template <LieGroupoid G>
double noether_defect(const G& gr, const DiscreteLagrangian<typename G::Element>& L,
                      const NoetherSymmetry<typename G::Base>& X,
                      const std::vector<typename G::Element>& samples, double delta = 1e-5) {
  double worst = 0.0;
  for (const auto& g : samples) {
    const auto x = gr.source(g);
    const auto y = gr.target(g);
    const double value = -right_derivative(gr, L, g, X.section(x), delta) +
                         left_derivative(gr, L, g, X.section(y), delta) - X.f(y) + X.f(x);
    worst = std::max(worst, std::abs(value));
  }
  return worst;
}

/// Noether constant F(g) = ->X(g)(L) - f(source g).
template <LieGroupoid G>
double noether_constant(const G& gr, const DiscreteLagrangian<typename G::Element>& L,
                        const NoetherSymmetry<typename G::Base>& X, const typename G::Element& g,
                        double delta = 1e-5) {
  const auto x = gr.source(g);
  return right_derivative(gr, L, g, X.section(x), delta) - X.f(x);
}

/// Same constant through F-L: ->X(g)L = <F-L(g), X(source g)>, so the analytic
/// calculus avoids the differencing noise.
template <LieGroupoid G>
double noether_constant(const G& gr, const DiscreteLagrangian<typename G::Element>& L,
                        const NoetherSymmetry<typename G::Base>& X, const typename G::Element& g,
                        const CalculusConfig& calc) {
  const auto x = gr.source(g);
  return legendre_minus(gr, L, g, calc).coords.dot(X.section(x)) - X.f(x);
}

struct ConservationReport {
  std::vector<std::string> names;
  /// values[q][k]: quantity q at step k.
  std::vector<std::vector<double>> values;
  std::vector<double> max_abs_drift;
  std::vector<double> max_rel_drift;

  /// Index of a quantity by name, or names.size() if absent.
  std::size_t index(const std::string& name) const {
    return static_cast<std::size_t>(std::find(names.begin(), names.end(), name) - names.begin());
  }
};

/// Drift of each tracked quantity relative to its value at step 0. The
/// relative drift divides by |value at step 0| (or 1 when that is zero).
inline ConservationReport make_conservation_report(std::vector<std::string> names,
                                                   std::vector<std::vector<double>> values) {
  if (names.size() != values.size()) {
    throw PreconditionError("make_conservation_report: one series per name required");
  }
  ConservationReport rep{std::move(names), std::move(values), {}, {}};
  for (const auto& series : rep.values) {
    double abs_drift = 0.0;
    if (!series.empty()) {
      for (double v : series) abs_drift = std::max(abs_drift, std::abs(v - series.front()));
    }
    const double ref = series.empty() || series.front() == 0.0 ? 1.0 : std::abs(series.front());
    rep.max_abs_drift.push_back(abs_drift);
    rep.max_rel_drift.push_back(abs_drift / ref);
  }
  return rep;
}

/// Evaluates named quantities along a trajectory.
template <class Element>
ConservationReport track_conserved(
    const std::vector<Element>& elements,
    const std::vector<std::pair<std::string, std::function<double(const Element&)>>>& quantities) {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;
  for (const auto& [name, fn] : quantities) {
    names.push_back(name);
    std::vector<double> series;
    series.reserve(elements.size());
    for (const auto& e : elements) series.push_back(fn(e));
    values.push_back(std::move(series));
  }
  return make_conservation_report(std::move(names), std::move(values));
}

struct SymplecticConfig {
  /// Step for tangent vectors and for T xi.
  double delta = 1e-5;
  /// Calculus used for the regularity matrices that define Omega_L.
  CalculusConfig calculus;
  /// Relative singular-value threshold for accepting the lift basis.
  double rank_tol = 1e-8;
};

namespace detail {

template <LieGroupoid G>
VecX right_lift(const G& gr, const typename G::Element& p, const VecX& e, double d) {
  const auto x = gr.source(p);
  return -(gr.to_chart(gr.compose(gr.invert(gr.retract(x, e, d)), p)) -
           gr.to_chart(gr.compose(gr.invert(gr.retract(x, e, -d)), p))) /
         (2.0 * d);
}

template <LieGroupoid G>
VecX left_lift(const G& gr, const typename G::Element& p, const VecX& e, double d) {
  const auto y = gr.target(p);
  return (gr.to_chart(gr.compose(p, gr.retract(y, e, d))) -
          gr.to_chart(gr.compose(p, gr.retract(y, e, -d)))) /
         (2.0 * d);
}

}  // namespace detail

/// Checks (P xi, xi)^* Omega_L = Omega_L at g as a matrix identity in lift
/// bases. P xi maps (->X(g), <-Y(g)) to
///   (-->Y(xi g), T xi(->X(g) + <-Y(g)) + ->Y(xi g)),
/// the second component being decomposed onto {<-e_j(xi g)} by least squares
/// in chart coordinates. Returns |P^T Omega(xi g) P - Omega(g)|_inf.
/// Throws DecompositionError when the left lifts at xi(g) lose rank.
template <LieGroupoid G>
double symplectic_residual(const G& gr, const DiscreteLagrangian<typename G::Element>& L,
                           const typename G::Element& g,
                           const std::function<typename G::Element(const typename G::Element&)>& xi,
                           const SymplecticConfig& cfg = {}) {
  const int n = gr.fiber_dim();
  if (n == 0) return 0.0;
  const double d = cfg.delta;
  const auto xg = xi(g);
  const auto bx = gr.fiber_basis(gr.source(g));
  const auto by = gr.fiber_basis(gr.target(g));
  const auto bz = gr.fiber_basis(gr.target(xg));
  const auto bw = gr.fiber_basis(gr.source(xg));

  MatX left_basis(gr.chart_dim(), n);
  for (int j = 0; j < n; ++j) left_basis.col(j) = detail::left_lift(gr, xg, bz[j], d);
  Eigen::JacobiSVD<MatX> svd(left_basis, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (!(sv(n - 1) > cfg.rank_tol * sv(0))) {
    throw DecompositionError("symplectic_residual: left-invariant lifts at xi(g) are dependent");
  }

  const auto tangent_of_xi = [&](auto&& curve) -> VecX {
    return (gr.to_chart(xi(curve(d))) - gr.to_chart(xi(curve(-d)))) / (2.0 * d);
  };

  MatX P = MatX::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    // Curve through g with tangent ->e_i(g).
    const VecX t = tangent_of_xi([&](double s) {
      return gr.compose(gr.invert(gr.retract(gr.source(g), bx[i], -s)), g);
    });
    P.block(n, i, n, 1) = svd.solve(t);
  }
  for (int j = 0; j < n; ++j) {
    const VecX t = tangent_of_xi([&](double s) {
      return gr.compose(g, gr.retract(gr.target(g), by[j], s));
    });
    P(j, n + j) = -1.0;
    P.block(n, n + j, n, 1) = svd.solve(t + detail::right_lift(gr, xg, bw[j], d));
  }

  const MatX omega_g = omega_matrix(regularity_matrix(gr, L, g, cfg.calculus).matrix);
  const MatX omega_x = omega_matrix(regularity_matrix(gr, L, xg, cfg.calculus).matrix);
  return (P.transpose() * omega_x * P - omega_g).cwiseAbs().maxCoeff();
}

/// A groupoid morphism Phi: G -> H with its algebroid map A Phi at each base
/// point of G.
template <class ElementG, class BaseG, class ElementH>
struct GroupoidMorphism {
  std::function<ElementH(const ElementG&)> map;
  std::function<VecX(const BaseG&, const VecX&)> algebroid_map;
};

struct ReductionReport {
  /// max_k |chart(Phi(up_k)) - chart(down_k)|_inf.
  double trajectory = 0.0;
  /// max over samples |D_DEL L(g,h)(v) - D_DEL L'(Phi g, Phi h)(A Phi v)|.
  double pairing = 0.0;

  double value() const { return std::max(trajectory, pairing); }
};

/// Compares an unreduced system (G, L) with its reduction (H, L') along Phi,
/// requiring L = L' o Phi on the sample points (relative 1e-12).
template <LieGroupoid G, LieGroupoid H>
ReductionReport reduction_check(
    const G& up, const H& down,
    const GroupoidMorphism<typename G::Element, typename G::Base, typename H::Element>& phi,
    const DiscreteLagrangian<typename G::Element>& L_up,
    const DiscreteLagrangian<typename H::Element>& L_down,
    const std::vector<typename G::Element>& trajectory_up,
    const std::vector<typename H::Element>& trajectory_down,
    const std::vector<std::tuple<typename G::Element, typename G::Element, VecX>>& samples,
    const CalculusConfig& calc = {}) {
  if (trajectory_up.size() != trajectory_down.size()) {
    throw PreconditionError("reduction_check: trajectories differ in length");
  }
  for (const auto& [g, h, v] : samples) {
    for (const auto* e : {&g, &h}) {
      const double a = L_up(*e);
      const double b = L_down(phi.map(*e));
      if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) {
        throw PreconditionError("reduction_check: L_up != L_down o Phi on the samples");
      }
    }
  }
  ReductionReport rep;
  for (std::size_t k = 0; k < trajectory_up.size(); ++k) {
    const VecX a = down.to_chart(phi.map(trajectory_up[k]));
    const VecX b = down.to_chart(trajectory_down[k]);
    rep.trajectory = std::max(rep.trajectory, (a - b).template lpNorm<Eigen::Infinity>());
  }
  for (const auto& [g, h, v] : samples) {
    const double lhs = del_residual(up, L_up, g, h, calc).coords.dot(v);
    const VecX w = phi.algebroid_map(up.target(g), v);
    const double rhs = del_residual(down, L_down, phi.map(g), phi.map(h), calc).coords.dot(w);
    rep.pairing = std::max(rep.pairing, std::abs(lhs - rhs));
  }
  return rep;
}

}  // namespace lgi

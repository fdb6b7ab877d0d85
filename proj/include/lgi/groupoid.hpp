#pragma once

// Abstract Lie groupoid interface and the discrete-mechanics calculus built on
// it: invariant derivatives of a discrete Lagrangian, the discrete
// Euler-Lagrange (DEL) residual, the two discrete Legendre transforms, the
// regularity matrix and the Poincare-Cartan 2-section.
//
// Fiber vectors and momenta are coordinate vectors in a global basis of the
// algebroid fiber; every instance in this library trivializes its algebroid
// with a constant basis, so the i-th basis vector is the i-th unit vector.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "lgi/error.hpp"
#include "lgi/geom.hpp"

namespace lgi {

/// Base points closer than this are treated as equal by compose().
inline constexpr double kComposableTol = 1e-9;

template <class G>
concept LieGroupoid = requires(const G& gr, const typename G::Element& g,
                               const typename G::Base& x, const VecX& v, double t) {
  typename G::Element;
  typename G::Base;
  { gr.source(g) } -> std::convertible_to<typename G::Base>;
  { gr.target(g) } -> std::convertible_to<typename G::Base>;
  { gr.identity(x) } -> std::convertible_to<typename G::Element>;
  { gr.compose(g, g) } -> std::convertible_to<typename G::Element>;
  { gr.invert(g) } -> std::convertible_to<typename G::Element>;
  { gr.fiber_dim() } -> std::convertible_to<int>;
  { gr.fiber_basis(x) } -> std::convertible_to<std::vector<VecX>>;
  { gr.retract(x, v, t) } -> std::convertible_to<typename G::Element>;
  { gr.chart_dim() } -> std::convertible_to<int>;
  { gr.to_chart(g) } -> std::convertible_to<VecX>;
  { gr.from_chart(v) } -> std::convertible_to<typename G::Element>;
  { gr.base_distance(x, x) } -> std::convertible_to<double>;
};

/// Groupoids that can propose a successor of g (an element with
/// source = target(g)) continuing g's "velocity". Used to warm-start Newton.
template <class G>
concept Extrapolating = LieGroupoid<G> && requires(const G& gr, const typename G::Element& g) {
  { gr.extrapolate(g) } -> std::convertible_to<typename G::Element>;
};

inline std::vector<VecX> canonical_fiber_basis(int n) {
  std::vector<VecX> basis;
  basis.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) basis.push_back(VecX::Unit(n, i));
  return basis;
}

/// Element of the dual fiber A*_x G, in coordinates dual to the fiber basis.
template <class Base>
struct Momentum {
  Base base;
  VecX coords;
};

/// A discrete Lagrangian L: G -> R. The optional hooks are closed-form
/// discrete Legendre transforms; they are used only when a calculus
/// configuration asks for DerivativeMode::analytic.
template <class Element>
struct DiscreteLagrangian {
  std::function<double(const Element&)> value;
  std::function<VecX(const Element&)> analytic_legendre_plus;
  std::function<VecX(const Element&)> analytic_legendre_minus;

  double operator()(const Element& g) const { return value(g); }
  bool has_analytic() const {
    return static_cast<bool>(analytic_legendre_plus) && static_cast<bool>(analytic_legendre_minus);
  }
};

enum class DerivativeMode { finite_difference, analytic };

struct CalculusConfig {
  /// Step of the first-derivative central differences.
  double fd_step = 1e-5;
  /// Step of the nested (mixed second) central differences.
  double fd_step_second = 1e-4;
  DerivativeMode mode = DerivativeMode::finite_difference;
};

template <LieGroupoid G>
void require_composable(const G& gr, const typename G::Element& g, const typename G::Element& h) {
  if (!(gr.base_distance(gr.target(g), gr.source(h)) <= kComposableTol)) {
    throw ContractViolation("pair is not composable: target(g) != source(h)");
  }
}

/// Left-invariant derivative <-v(g)(L) = d/dt L(g * retract(target(g), v, t))
/// at t = 0, by central differences.
template <LieGroupoid G>
double left_derivative(const G& gr, const DiscreteLagrangian<typename G::Element>& L,
                       const typename G::Element& g, const VecX& v, double delta = 1e-5) {
  const auto x = gr.target(g);
  const double fp = L(gr.compose(g, gr.retract(x, v, delta)));
  const double fm = L(gr.compose(g, gr.retract(x, v, -delta)));
  return (fp - fm) / (2.0 * delta);
}

/// Right-invariant derivative ->v(h)(L) = -d/dt L(retract(source(h), v, t)^-1 * h).
template <LieGroupoid G>
double right_derivative(const G& gr, const DiscreteLagrangian<typename G::Element>& L,
                        const typename G::Element& h, const VecX& v, double delta = 1e-5) {
  const auto x = gr.source(h);
  const double fp = L(gr.compose(gr.invert(gr.retract(x, v, delta)), h));
  const double fm = L(gr.compose(gr.invert(gr.retract(x, v, -delta)), h));
  return -(fp - fm) / (2.0 * delta);
}

namespace detail {

template <class Element>
void require_analytic(const DiscreteLagrangian<Element>& L) {
  if (!L.has_analytic()) {
    throw PreconditionError("analytic derivatives requested but the Lagrangian provides none");
  }
}

}  // namespace detail

/// F+L(g) in A*_{target(g)} G.
template <LieGroupoid G>
Momentum<typename G::Base> legendre_plus(const G& gr,
                                         const DiscreteLagrangian<typename G::Element>& L,
                                         const typename G::Element& g,
                                         const CalculusConfig& cfg = {}) {
  if (cfg.mode == DerivativeMode::analytic) {
    detail::require_analytic(L);
    return {gr.target(g), L.analytic_legendre_plus(g)};
  }
  const auto basis = gr.fiber_basis(gr.target(g));
  VecX c(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    c(static_cast<Eigen::Index>(i)) = left_derivative(gr, L, g, basis[i], cfg.fd_step);
  }
  return {gr.target(g), std::move(c)};
}

/// F-L(h) in A*_{source(h)} G.
template <LieGroupoid G>
Momentum<typename G::Base> legendre_minus(const G& gr,
                                          const DiscreteLagrangian<typename G::Element>& L,
                                          const typename G::Element& h,
                                          const CalculusConfig& cfg = {}) {
  if (cfg.mode == DerivativeMode::analytic) {
    detail::require_analytic(L);
    return {gr.source(h), L.analytic_legendre_minus(h)};
  }
  const auto basis = gr.fiber_basis(gr.source(h));
  VecX c(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    c(static_cast<Eigen::Index>(i)) = right_derivative(gr, L, h, basis[i], cfg.fd_step);
  }
  return {gr.source(h), std::move(c)};
}

/// Discrete Euler-Lagrange operator D_DEL L(g, h) = F+L(g) - F-L(h), a
/// covector at target(g) = source(h). Zero iff (g, h) solves the DEL
/// equations.
template <LieGroupoid G>
Momentum<typename G::Base> del_residual(const G& gr,
                                        const DiscreteLagrangian<typename G::Element>& L,
                                        const typename G::Element& g,
                                        const typename G::Element& h,
                                        const CalculusConfig& cfg = {}) {
  require_composable(gr, g, h);
  auto plus = legendre_plus(gr, L, g, cfg);
  const auto minus = legendre_minus(gr, L, h, cfg);
  plus.coords -= minus.coords;
  return plus;
}

/// 2-norm condition number; +inf for (numerically) singular matrices.
inline double condition_number(const MatX& m) {
  if (m.size() == 0) return 1.0;
  Eigen::JacobiSVD<MatX> svd(m);
  const auto& s = svd.singularValues();
  const double smax = s(0);
  const double smin = s(s.size() - 1);
  if (!(smax > 0.0) || smin <= smax * 1e-15) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

struct RegularityInfo {
  MatX matrix;
  double condition = 0.0;
};

/// Matrix ->e_i(<-e_j L)(g). Since right- and left-invariant fields commute,
/// the entry is the mixed derivative
///   -d^2/ds dt L(retract(source(g), e_i, s)^-1 * g * retract(target(g), e_j, t)).
template <LieGroupoid G>
RegularityInfo regularity_matrix(const G& gr, const DiscreteLagrangian<typename G::Element>& L,
                                 const typename G::Element& g, const CalculusConfig& cfg = {}) {
  const int n = gr.fiber_dim();
  const auto x = gr.source(g);
  const auto y = gr.target(g);
  const auto bx = gr.fiber_basis(x);
  const auto by = gr.fiber_basis(y);
  MatX m(n, n);
  if (cfg.mode == DerivativeMode::analytic) {
    detail::require_analytic(L);
    const double d = cfg.fd_step;
    for (int i = 0; i < n; ++i) {
      const auto gp = gr.compose(gr.invert(gr.retract(x, bx[i], d)), g);
      const auto gm = gr.compose(gr.invert(gr.retract(x, bx[i], -d)), g);
      m.row(i) = -(L.analytic_legendre_plus(gp) - L.analytic_legendre_plus(gm)).transpose() / (2.0 * d);
    }
  } else {
    const double d = cfg.fd_step_second;
    for (int i = 0; i < n; ++i) {
      const auto gp = gr.compose(gr.invert(gr.retract(x, bx[i], d)), g);
      const auto gm = gr.compose(gr.invert(gr.retract(x, bx[i], -d)), g);
      for (int j = 0; j < n; ++j) {
        const auto rp = gr.retract(y, by[j], d);
        const auto rm = gr.retract(y, by[j], -d);
        const double fpp = L(gr.compose(gp, rp));
        const double fpm = L(gr.compose(gp, rm));
        const double fmp = L(gr.compose(gm, rp));
        const double fmm = L(gr.compose(gm, rm));
        m(i, j) = -(fpp - fpm - fmp + fmm) / (4.0 * d * d);
      }
    }
  }
  return {m, condition_number(m)};
}

/// Matrix of Omega_L in the lift basis {e_i^(1,0), e_j^(0,1)}:
/// [[0, -M], [M^T, 0]] with M the regularity matrix.
inline MatX omega_matrix(const MatX& regularity) {
  const auto n = regularity.rows();
  MatX w = MatX::Zero(2 * n, 2 * n);
  w.topRightCorner(n, n) = -regularity;
  w.bottomLeftCorner(n, n) = regularity.transpose();
  return w;
}

/// A vector of the prolongation Vbeta (+) Valpha at g given by lift
/// coordinates: `right` multiplies the right-invariant lifts of the fiber
/// basis at source(g), `left` the left-invariant lifts at target(g).
struct LiftVector {
  VecX right;
  VecX left;
};

/// Poincare-Cartan 2-section
///   Omega_L((X, Y), (X', Y')) = -->X(<-Y' L) + ->X'(<-Y L).
template <LieGroupoid G>
double omega_L(const G& gr, const DiscreteLagrangian<typename G::Element>& L,
               const typename G::Element& g, const LiftVector& u, const LiftVector& w,
               const CalculusConfig& cfg = {}) {
  const MatX m = regularity_matrix(gr, L, g, cfg).matrix;
  return -u.right.dot(m * w.left) + w.right.dot(m * u.left);
}

/// Largest violation of the groupoid axioms on the composable triple
/// (g, h, k), measured in chart coordinates (and base distances). Also checks
/// the retraction contract at target(g) along v.
template <LieGroupoid G>
double axiom_defect(const G& gr, const typename G::Element& g, const typename G::Element& h,
                    const typename G::Element& k, const VecX& v, double t) {
  require_composable(gr, g, h);
  require_composable(gr, h, k);
  const auto dist = [&](const typename G::Element& a, const typename G::Element& b) {
    return (gr.to_chart(a) - gr.to_chart(b)).template lpNorm<Eigen::Infinity>();
  };
  double worst = 0.0;
  const auto track = [&](double value) { worst = std::max(worst, value); };

  const auto x = gr.source(g);
  const auto ex = gr.identity(x);
  track(gr.base_distance(gr.source(ex), x));
  track(gr.base_distance(gr.target(ex), x));

  const auto gh = gr.compose(g, h);
  track(gr.base_distance(gr.source(gh), gr.source(g)));
  track(gr.base_distance(gr.target(gh), gr.target(h)));
  track(dist(gr.compose(gh, k), gr.compose(g, gr.compose(h, k))));

  track(dist(gr.compose(gr.identity(gr.source(g)), g), g));
  track(dist(gr.compose(g, gr.identity(gr.target(g))), g));
  const auto gi = gr.invert(g);
  track(dist(gr.compose(g, gi), gr.identity(gr.source(g))));
  track(dist(gr.compose(gi, g), gr.identity(gr.target(g))));

  const auto y = gr.target(g);
  track(dist(gr.retract(y, v, 0.0), gr.identity(y)));
  track(gr.base_distance(gr.source(gr.retract(y, v, t)), y));
  return worst;
}

}  // namespace lgi

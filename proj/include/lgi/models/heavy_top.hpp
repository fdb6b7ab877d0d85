#pragma once

#include <vector>

#include "lgi/geom.hpp"
#include "lgi/groupoid.hpp"
#include "lgi/models/moser_veselov.hpp"

namespace lgi {

struct HeavyTopParams {
  double mass = 1.0;
  double gravity = 9.81;
  double length = 1.0;
  /// Unit vector from the fixed point to the center of mass, body frame.
  Vec3 e = Vec3::UnitZ();
  Mat3 inertia = Mat3::Identity();
  /// Time step.
  double h = 0.1;

  double mgl() const { return mass * gravity * length; }
  Mat3 II() const { return lagrangian_inertia(inertia); }
};

/// Action groupoid S^2 x SO(3) over S^2 for the right action Gamma.W = W^T Gamma:
///   source(Gamma, W) = Gamma, target(Gamma, W) = W^T Gamma,
///   (Gamma, W)(W^T Gamma, W') = (Gamma, W W').
/// The algebroid is S^2 x so(3) with the constant basis of so(3);
/// retract(Gamma, K, t) = (Gamma, exp(t K)).
class ActionGroupoidHeavyTop {
public:
  struct Element {
    Vec3 gamma;
    Rotation W;
  };
  using Base = Vec3;

  Base source(const Element& g) const { return g.gamma; }
  Base target(const Element& g) const { return g.W.transpose() * g.gamma; }
  Element identity(const Base& x) const { return {x, Rotation::Identity()}; }
  Element compose(const Element& g, const Element& h) const;
  Element invert(const Element& g) const { return {target(g), g.W.transpose()}; }
  int fiber_dim() const { return 3; }
  std::vector<VecX> fiber_basis(const Base&) const { return canonical_fiber_basis(3); }
  Element retract(const Base& x, const VecX& v, double t) const {
    return {x, exp_so3(t * Vec3(v))};
  }
  /// Embedding coordinates (Gamma, vec(W)).
  int chart_dim() const { return 12; }
  VecX to_chart(const Element& g) const;
  Element from_chart(const VecX& c) const;
  double base_distance(const Base& a, const Base& b) const {
    return (a - b).lpNorm<Eigen::Infinity>();
  }
  /// Keeps W; re-projected so roundoff in W does not accumulate over steps.
  Element extrapolate(const Element& g) const { return {target(g), project_to_so3(g.W)}; }
};

/// L(Gamma, W) = -Tr(II W)/h - h m g l Gamma.e.
/// Analytic hooks: F+L = W^T Pi/h, F-L = Pi/h - h m g l (Gamma x e), where
/// Pi = body_momentum(W, II).
DiscreteLagrangian<ActionGroupoidHeavyTop::Element> heavy_top_lagrangian(const HeavyTopParams& p);

struct HeavyTopState {
  Vec3 gamma;
  Rotation W;
  /// Carried alongside W; must equal body_momentum(W, II).
  Vec3 Pi;
};

/// Builds a consistent state from (Gamma, W).
HeavyTopState make_heavy_top_state(const Vec3& gamma, const Rotation& W, const HeavyTopParams& p);

/// Closed-form heavy top step:
///   Gamma_{k+1} = W_k^T Gamma_k,
///   Pi_{k+1} = W_k^T Pi_k + m g l h^2 Gamma_{k+1} x e,
///   W_{k+1} solves Pi_{k+1}^ = W II - II W^T (seeded with W_k).
/// Throws PreconditionError when the state's Pi and W disagree by more than
/// 1e-9.
HeavyTopState heavy_top_step(const HeavyTopState& state, const HeavyTopParams& p,
                             const MoserVeselovOptions& options = {});

/// Residual of the discrete Euler-Poincare equations on the action groupoid
/// S^2 x SO(3) at the composable pair ((x, h_k), (x.h_k, h_next)):
///   mu_{k+1} - Ad*_{h_k} mu_k - d(L_{h_next} o ((x h_k).))(e),
/// with mu(x, h) = d(L_x o r_h)(e) the right-trivialized group derivative.
/// All derivatives are central differences with step delta.
Vec3 discrete_euler_poincare_residual(
    const Vec3& x, const Rotation& h_k, const Rotation& h_next,
    const DiscreteLagrangian<ActionGroupoidHeavyTop::Element>& L, double delta = 1e-5);

}  // namespace lgi

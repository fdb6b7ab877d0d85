#pragma once

#include <vector>

#include "lgi/geom.hpp"
#include "lgi/groupoid.hpp"
#include "lgi/models/heavy_top.hpp"

namespace lgi {

/// Pair groupoid SO(3) x SO(3) over SO(3), optionally carrying a parameter
/// vector m (the base is SO(3) x {m}, m is never varied). With m unused this
/// is the unreduced rigid body; with m = spatial gravity direction it is the
/// unreduced heavy top.
///   (R, S, m)(S, T, m) = (R, T, m),   retract((R, m), v, t) = (R, R exp(t v), m).
/// The fiber basis is the body-frame basis of so(3).
class RotationPairGroupoid {
public:
  struct Element {
    Rotation R;
    Rotation S;
    Vec3 param = Vec3::Zero();
  };
  struct Base {
    Rotation R;
    Vec3 param = Vec3::Zero();
  };

  Base source(const Element& g) const { return {g.R, g.param}; }
  Base target(const Element& g) const { return {g.S, g.param}; }
  Element identity(const Base& x) const { return {x.R, x.R, x.param}; }
  Element compose(const Element& g, const Element& h) const;
  Element invert(const Element& g) const { return {g.S, g.R, g.param}; }
  int fiber_dim() const { return 3; }
  std::vector<VecX> fiber_basis(const Base&) const { return canonical_fiber_basis(3); }
  Element retract(const Base& x, const VecX& v, double t) const {
    return {x.R, x.R * exp_so3(t * Vec3(v)), x.param};
  }
  /// Embedding coordinates (vec(R), vec(S), m).
  int chart_dim() const { return 21; }
  VecX to_chart(const Element& g) const;
  Element from_chart(const VecX& c) const;
  double base_distance(const Base& a, const Base& b) const;
  /// (R, S) -> (S, S R^T S): repeats the relative rotation.
  Element extrapolate(const Element& g) const {
    return {g.S, project_to_so3(g.S * g.R.transpose() * g.S), g.param};
  }
};

/// Left-invariant rigid body Lagrangian L(R, S) = -Tr(II R^T S)/h. The
/// analytic hooks are those of free_rigid_body_lagrangian at R^T S.
DiscreteLagrangian<RotationPairGroupoid::Element> rigid_body_pair_lagrangian(const Mat3& inertia,
                                                                             double h);

/// Heavy top Lagrangian with the spatial direction m as parameter:
/// L(R, S, m) = L_top(R^T m, R^T S); the analytic hooks are the heavy top's at
/// the reduced element.
DiscreteLagrangian<RotationPairGroupoid::Element> parametrized_heavy_top_lagrangian(
    const HeavyTopParams& p);

/// Reduction morphism Phi_l(R, S) = R^T S onto SO(3) (a groupoid over a point).
Rotation reduce_left(const RotationPairGroupoid::Element& g);

/// Reduction morphism (R, S, m) -> (R^T m, R^T S) onto the heavy top action
/// groupoid.
ActionGroupoidHeavyTop::Element reduce_to_action(const RotationPairGroupoid::Element& g);

}  // namespace lgi

#pragma once

#include <vector>

#include "lgi/geom.hpp"
#include "lgi/groupoid.hpp"
#include "lgi/models/moser_veselov.hpp"

namespace lgi {

/// SO(3) as a groupoid over a single point. The algebroid is so(3) in axial
/// coordinates; retract(., v, t) = exp_so3(t v).
class LieGroupSO3 {
public:
  struct Point {};
  using Element = Rotation;
  using Base = Point;

  Base source(const Element&) const { return {}; }
  Base target(const Element&) const { return {}; }
  Element identity(const Base&) const { return Rotation::Identity(); }
  Element compose(const Element& g, const Element& h) const { return g * h; }
  Element invert(const Element& g) const { return g.transpose(); }
  int fiber_dim() const { return 3; }
  std::vector<VecX> fiber_basis(const Base&) const { return canonical_fiber_basis(3); }
  Element retract(const Base&, const VecX& v, double t) const;
  /// Embedding coordinates: the 9 matrix entries, column-major.
  int chart_dim() const { return 9; }
  VecX to_chart(const Element& g) const;
  Element from_chart(const VecX& c) const;
  double base_distance(const Base&, const Base&) const { return 0.0; }
  /// g itself, re-projected onto SO(3).
  Element extrapolate(const Element& g) const { return project_to_so3(g); }
};

/// Free rigid body L(W) = -Tr(II W)/h, with II = lagrangian_inertia(inertia).
/// Analytic hooks: F-L(W) = Pi(W)/h and F+L(W) = W^T Pi(W)/h with
/// Pi(W) = body_momentum(W, II).
DiscreteLagrangian<Rotation> free_rigid_body_lagrangian(const Mat3& inertia, double h);

/// mu_{k+1} = Ad*_{g_k} mu_k on so(3)*.
Vec3 discrete_lie_poisson_step(const Vec3& mu, const Rotation& g);

/// Closed-form free rigid body step W_k -> W_{k+1}: Pi_{k+1} = W_k^T Pi_k,
/// then W_{k+1} from the Moser-Veselov equation, seeded with W_k.
Rotation rigid_body_step(const Rotation& W, const Mat3& II, const MoserVeselovOptions& options = {});

}  // namespace lgi

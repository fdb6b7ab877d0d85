#include "lgi/models/lie_group_so3.hpp"

#include "lgi/error.hpp"

namespace lgi {

Rotation LieGroupSO3::retract(const Base&, const VecX& v, double t) const {
  return exp_so3(t * Vec3(v));
}

VecX LieGroupSO3::to_chart(const Element& g) const {
  return Eigen::Map<const VecX>(g.data(), 9);
}

Rotation LieGroupSO3::from_chart(const VecX& c) const {
  if (c.size() != 9) throw PreconditionError("LieGroupSO3::from_chart: wrong size");
  return project_to_so3(Eigen::Map<const Mat3>(c.data()));
}

DiscreteLagrangian<Rotation> free_rigid_body_lagrangian(const Mat3& inertia, double h) {
  const Mat3 II = lagrangian_inertia(inertia);
  DiscreteLagrangian<Rotation> L;
  L.value = [=](const Rotation& W) { return -(II * W).trace() / h; };
  L.analytic_legendre_plus = [=](const Rotation& W) -> VecX {
    return W.transpose() * body_momentum(W, II) / h;
  };
  L.analytic_legendre_minus = [=](const Rotation& W) -> VecX { return body_momentum(W, II) / h; };
  return L;
}

Vec3 discrete_lie_poisson_step(const Vec3& mu, const Rotation& g) { return ad_star_so3(g, mu); }

Rotation rigid_body_step(const Rotation& W, const Mat3& II, const MoserVeselovOptions& options) {
  const Vec3 next = discrete_lie_poisson_step(body_momentum(W, II), W);
  return moser_veselov_solve(next, II, W, options);
}

}  // namespace lgi

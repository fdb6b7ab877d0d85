#include "lgi/models/heavy_top.hpp"

#include "lgi/error.hpp"

namespace lgi {

ActionGroupoidHeavyTop::Element ActionGroupoidHeavyTop::compose(const Element& g,
                                                                const Element& h) const {
  if (!(base_distance(target(g), h.gamma) <= kComposableTol)) {
    throw ContractViolation("ActionGroupoidHeavyTop::compose: W^T Gamma != Gamma'");
  }
  return {g.gamma, g.W * h.W};
}

VecX ActionGroupoidHeavyTop::to_chart(const Element& g) const {
  VecX c(12);
  c.head<3>() = g.gamma;
  c.tail<9>() = Eigen::Map<const VecX>(g.W.data(), 9);
  return c;
}

ActionGroupoidHeavyTop::Element ActionGroupoidHeavyTop::from_chart(const VecX& c) const {
  if (c.size() != 12) throw PreconditionError("ActionGroupoidHeavyTop::from_chart: wrong size");
  const Vec3 gamma = c.head<3>();
  return {gamma.normalized(), project_to_so3(Eigen::Map<const Mat3>(c.tail<9>().data()))};
}

DiscreteLagrangian<ActionGroupoidHeavyTop::Element> heavy_top_lagrangian(const HeavyTopParams& p) {
  using E = ActionGroupoidHeavyTop::Element;
  const Mat3 II = p.II();
  const double h = p.h;
  const double mgl = p.mgl();
  const Vec3 e = p.e;
  DiscreteLagrangian<E> L;
  L.value = [=](const E& g) { return -(II * g.W).trace() / h - h * mgl * g.gamma.dot(e); };
  L.analytic_legendre_plus = [=](const E& g) -> VecX {
    return g.W.transpose() * body_momentum(g.W, II) / h;
  };
  L.analytic_legendre_minus = [=](const E& g) -> VecX {
    return body_momentum(g.W, II) / h - h * mgl * g.gamma.cross(e);
  };
  return L;
}

HeavyTopState make_heavy_top_state(const Vec3& gamma, const Rotation& W, const HeavyTopParams& p) {
  return {gamma, W, body_momentum(W, p.II())};
}

HeavyTopState heavy_top_step(const HeavyTopState& s, const HeavyTopParams& p,
                             const MoserVeselovOptions& options) {
  const Mat3 II = p.II();
  if ((s.Pi - body_momentum(s.W, II)).lpNorm<Eigen::Infinity>() > 1e-9) {
    throw PreconditionError("heavy_top_step: Pi is inconsistent with W");
  }
  HeavyTopState next;
  next.gamma = s.W.transpose() * s.gamma;
  next.Pi = s.W.transpose() * s.Pi + p.mgl() * p.h * p.h * next.gamma.cross(p.e);
  next.W = moser_veselov_solve(next.Pi, II, s.W, options);
  return next;
}

Vec3 discrete_euler_poincare_residual(const Vec3& x, const Rotation& h_k, const Rotation& h_next,
                                      const DiscreteLagrangian<ActionGroupoidHeavyTop::Element>& L,
                                      double delta) {
  const Vec3 y = h_k.transpose() * x;  // x . h_k
  Vec3 mu_k;
  Vec3 mu_next;
  Vec3 force;
  for (int i = 0; i < 3; ++i) {
    const Rotation ep = exp_so3(delta * Vec3::Unit(i));
    const Rotation em = ep.transpose();
    mu_k(i) = (L({x, ep * h_k}) - L({x, em * h_k})) / (2.0 * delta);
    mu_next(i) = (L({y, ep * h_next}) - L({y, em * h_next})) / (2.0 * delta);
    // y . exp(t e_i) = exp(t e_i)^T y.
    force(i) = (L({ep.transpose() * y, h_next}) - L({em.transpose() * y, h_next})) / (2.0 * delta);
  }
  return mu_next - ad_star_so3(h_k, mu_k) - force;
}

}  // namespace lgi

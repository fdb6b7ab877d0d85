#include "lgi/models/rotation_pair.hpp"

#include <algorithm>

#include "lgi/error.hpp"

namespace lgi {

RotationPairGroupoid::Element RotationPairGroupoid::compose(const Element& g,
                                                            const Element& h) const {
  if (!(base_distance(target(g), source(h)) <= kComposableTol)) {
    throw ContractViolation("RotationPairGroupoid::compose: (R, S)(S', T) needs S == S'");
  }
  return {g.R, h.S, g.param};
}

VecX RotationPairGroupoid::to_chart(const Element& g) const {
  VecX c(21);
  c.segment<9>(0) = Eigen::Map<const VecX>(g.R.data(), 9);
  c.segment<9>(9) = Eigen::Map<const VecX>(g.S.data(), 9);
  c.segment<3>(18) = g.param;
  return c;
}

RotationPairGroupoid::Element RotationPairGroupoid::from_chart(const VecX& c) const {
  if (c.size() != 21) throw PreconditionError("RotationPairGroupoid::from_chart: wrong size");
  const VecX r = c.segment<9>(0);
  const VecX s = c.segment<9>(9);
  return {project_to_so3(Eigen::Map<const Mat3>(r.data())),
          project_to_so3(Eigen::Map<const Mat3>(s.data())), c.segment<3>(18)};
}

double RotationPairGroupoid::base_distance(const Base& a, const Base& b) const {
  return std::max((a.R - b.R).cwiseAbs().maxCoeff(), (a.param - b.param).lpNorm<Eigen::Infinity>());
}

DiscreteLagrangian<RotationPairGroupoid::Element> rigid_body_pair_lagrangian(const Mat3& inertia,
                                                                             double h) {
  const Mat3 II = lagrangian_inertia(inertia);
  DiscreteLagrangian<RotationPairGroupoid::Element> L;
  L.value = [=](const RotationPairGroupoid::Element& g) {
    return -(II * g.R.transpose() * g.S).trace() / h;
  };
  // Both lifts act on W = R^T S exactly as the SO(3) lifts do.
  L.analytic_legendre_plus = [=](const RotationPairGroupoid::Element& g) -> VecX {
    const Rotation W = reduce_left(g);
    return W.transpose() * body_momentum(W, II) / h;
  };
  L.analytic_legendre_minus = [=](const RotationPairGroupoid::Element& g) -> VecX {
    return body_momentum(reduce_left(g), II) / h;
  };
  return L;
}

DiscreteLagrangian<RotationPairGroupoid::Element> parametrized_heavy_top_lagrangian(
    const HeavyTopParams& p) {
  auto top = heavy_top_lagrangian(p);
  DiscreteLagrangian<RotationPairGroupoid::Element> L;
  L.value = [top](const RotationPairGroupoid::Element& g) { return top(reduce_to_action(g)); };
  L.analytic_legendre_plus = [top](const RotationPairGroupoid::Element& g) {
    return top.analytic_legendre_plus(reduce_to_action(g));
  };
  L.analytic_legendre_minus = [top](const RotationPairGroupoid::Element& g) {
    return top.analytic_legendre_minus(reduce_to_action(g));
  };
  return L;
}

Rotation reduce_left(const RotationPairGroupoid::Element& g) { return g.R.transpose() * g.S; }

ActionGroupoidHeavyTop::Element reduce_to_action(const RotationPairGroupoid::Element& g) {
  return {g.R.transpose() * g.param, g.R.transpose() * g.S};
}

}  // namespace lgi

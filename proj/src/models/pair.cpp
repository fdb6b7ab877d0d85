#include "lgi/models/pair.hpp"

#include "lgi/error.hpp"

namespace lgi {

PairGroupoid::PairGroupoid(int dim) : dim_(dim) {
  if (dim < 1) throw PreconditionError("PairGroupoid: dimension must be positive");
}

PairGroupoid::Element PairGroupoid::compose(const Element& g, const Element& h) const {
  if (!(base_distance(g.y, h.x) <= kComposableTol)) {
    throw ContractViolation("PairGroupoid::compose: (x, y)(y', z) needs y == y'");
  }
  return {g.x, h.y};
}

VecX PairGroupoid::to_chart(const Element& g) const {
  VecX c(2 * dim_);
  c << g.x, g.y;
  return c;
}

PairGroupoid::Element PairGroupoid::from_chart(const VecX& c) const {
  if (c.size() != 2 * dim_) throw PreconditionError("PairGroupoid::from_chart: wrong size");
  return {c.head(dim_), c.tail(dim_)};
}

double PairGroupoid::base_distance(const Base& a, const Base& b) const {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  return (a - b).lpNorm<Eigen::Infinity>();
}

DiscreteLagrangian<PairGroupoid::Element> free_particle_lagrangian(double mass, double h) {
  DiscreteLagrangian<PairGroupoid::Element> L;
  L.value = [=](const PairGroupoid::Element& g) {
    return 0.5 * mass * (g.y - g.x).squaredNorm() / h;
  };
  L.analytic_legendre_plus = [=](const PairGroupoid::Element& g) -> VecX {
    return mass * (g.y - g.x) / h;
  };
  L.analytic_legendre_minus = [=](const PairGroupoid::Element& g) -> VecX {
    return mass * (g.y - g.x) / h;
  };
  return L;
}

DiscreteLagrangian<PairGroupoid::Element> harmonic_oscillator_lagrangian(double mass,
                                                                         double stiffness,
                                                                         double h) {
  DiscreteLagrangian<PairGroupoid::Element> L;
  L.value = [=](const PairGroupoid::Element& g) {
    const VecX v = (g.y - g.x) / h;
    const VecX q = 0.5 * (g.x + g.y);
    return h * (0.5 * mass * v.squaredNorm() - 0.5 * stiffness * q.squaredNorm());
  };
  // D2 L and -D1 L.
  L.analytic_legendre_plus = [=](const PairGroupoid::Element& g) -> VecX {
    return mass * (g.y - g.x) / h - 0.25 * h * stiffness * (g.x + g.y);
  };
  L.analytic_legendre_minus = [=](const PairGroupoid::Element& g) -> VecX {
    return mass * (g.y - g.x) / h + 0.25 * h * stiffness * (g.x + g.y);
  };
  return L;
}

DiscreteLagrangian<PairGroupoid::Element> separable_lagrangian() {
  DiscreteLagrangian<PairGroupoid::Element> L;
  L.value = [](const PairGroupoid::Element& g) {
    return 0.5 * g.x.squaredNorm() + 0.5 * g.y.squaredNorm();
  };
  L.analytic_legendre_plus = [](const PairGroupoid::Element& g) -> VecX { return g.y; };
  L.analytic_legendre_minus = [](const PairGroupoid::Element& g) -> VecX { return -g.x; };
  return L;
}

}  // namespace lgi

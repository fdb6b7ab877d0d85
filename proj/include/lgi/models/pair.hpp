#pragma once

#include <vector>

#include "lgi/geom.hpp"
#include "lgi/groupoid.hpp"

namespace lgi {

/// Pair groupoid R^d x R^d over R^d: (x, y)(y, z) = (x, z).
/// The algebroid is TR^d with the canonical basis; retract(x, v, t) = (x, x + t v).
class PairGroupoid {
public:
  struct Element {
    VecX x;
    VecX y;
  };
  using Base = VecX;

  explicit PairGroupoid(int dim);

  int dim() const { return dim_; }

  Base source(const Element& g) const { return g.x; }
  Base target(const Element& g) const { return g.y; }
  Element identity(const Base& x) const { return {x, x}; }
  Element compose(const Element& g, const Element& h) const;
  Element invert(const Element& g) const { return {g.y, g.x}; }
  int fiber_dim() const { return dim_; }
  std::vector<VecX> fiber_basis(const Base&) const { return canonical_fiber_basis(dim_); }
  Element retract(const Base& x, const VecX& v, double t) const { return {x, x + t * v}; }
  int chart_dim() const { return 2 * dim_; }
  VecX to_chart(const Element& g) const;
  Element from_chart(const VecX& c) const;
  double base_distance(const Base& a, const Base& b) const;
  Element extrapolate(const Element& g) const { return {g.y, 2.0 * g.y - g.x}; }

private:
  int dim_;
};

/// L(x, y) = m |y - x|^2 / (2 h).
DiscreteLagrangian<PairGroupoid::Element> free_particle_lagrangian(double mass = 1.0,
                                                                   double h = 1.0);

/// Midpoint discretization of the harmonic oscillator
///   L(x, y) = h [ m/2 |(y - x)/h|^2 - k/2 |(x + y)/2|^2 ].
DiscreteLagrangian<PairGroupoid::Element> harmonic_oscillator_lagrangian(double mass,
                                                                         double stiffness,
                                                                         double h);

/// Separable L(x, y) = |x|^2/2 + |y|^2/2. Its mixed Hessian vanishes, so it
/// is nowhere regular.
DiscreteLagrangian<PairGroupoid::Element> separable_lagrangian();

}  // namespace lgi

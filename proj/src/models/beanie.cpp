#include "lgi/models/beanie.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "lgi/error.hpp"

namespace lgi {

BeaniePotential cosine_potential(double a) {
  // 1 - cos psi written without the cancellation near psi = 0.
  return {[a](double psi) { return 2.0 * a * std::pow(std::sin(0.5 * psi), 2); },
          [a](double psi) { return a * std::sin(psi); },
          [a](double psi) { return a * std::cos(psi); }};
}

BeanieGroupoid::BeanieGroupoid(double coupling) : coupling_(coupling) {}

BeanieGroupoid::Element BeanieGroupoid::from_velocities(double psi0, double psi1, double omega1,
                                                        double omega2, double omega3) {
  return {psi0, psi1, SE2{-omega3, Vec2(omega1, omega2)}};
}

BeanieGroupoid::Element BeanieGroupoid::compose(const Element& g, const Element& h) const {
  if (!(base_distance(g.psi1, h.psi0) <= kComposableTol)) {
    throw ContractViolation("BeanieGroupoid::compose: psi mismatch");
  }
  const double x = g.psi0;
  const double y = g.psi1;
  const double z = h.psi1;
  return {x, z,
          g.g * connection(x, y).inverse() * h.g * connection(y, z).inverse() * connection(x, z)};
}

BeanieGroupoid::Element BeanieGroupoid::invert(const Element& g) const {
  const double x = g.psi0;
  const double y = g.psi1;
  return {y, x, connection(x, y) * g.g.inverse() * connection(y, x)};
}

BeanieGroupoid::Element BeanieGroupoid::retract(const Base& x, const VecX& v, double t) const {
  return {x, x + t * v(0), exp_se2(t * Vec3(v.tail<3>()))};
}

VecX BeanieGroupoid::to_chart(const Element& g) const {
  VecX c(5);
  c << g.psi0, g.psi1, g.omega1(), g.omega2(), g.omega3();
  return c;
}

BeanieGroupoid::Element BeanieGroupoid::from_chart(const VecX& c) const {
  if (c.size() != 5) throw PreconditionError("BeanieGroupoid::from_chart: wrong size");
  return from_velocities(c(0), c(1), c(2), c(3), c(4));
}

DiscreteLagrangian<BeanieGroupoid::Element> beanie_lagrangian(const BeanieParams& p) {
  DiscreteLagrangian<BeanieGroupoid::Element> L;
  L.value = [p](const BeanieGroupoid::Element& q) {
    const double h2 = p.h * p.h;
    const double dpsi = (q.psi1 - q.psi0) / p.h;
    const double half_sin = std::sin(0.5 * q.omega3());
    return 0.5 * p.mass / h2 * q.g.translation.squaredNorm() +
           2.0 * (p.I1 + p.I2) / h2 * half_sin * half_sin +
           0.5 * p.reduced_inertia() * dpsi * dpsi - p.potential.value(0.5 * (q.psi0 + q.psi1));
  };
  // Invariant derivatives in the basis (d/dpsi, e1, e2, e3). Along the left
  // lift the SE(2) part moves as g A(x,y)^-1 exp(t xi) A(x,y), along the right
  // lift as Rot(c t a) exp(-t xi) g Rot(-c t a).
  L.analytic_legendre_plus = [p](const BeanieGroupoid::Element& q) {
    const double h2 = p.h * p.h;
    const double phi = p.coupling() * (q.psi1 - q.psi0);
    VecX out(4);
    out(0) = p.reduced_inertia() * (q.psi1 - q.psi0) / h2 -
             0.5 * p.potential.derivative(0.5 * (q.psi0 + q.psi1));
    out.segment<2>(1) = p.mass / h2 * (SE2::rotation(phi - q.g.angle).rotation_matrix() *
                                       q.g.translation);
    out(3) = (p.I1 + p.I2) / h2 * std::sin(q.omega3());
    return out;
  };
  L.analytic_legendre_minus = [p](const BeanieGroupoid::Element& q) {
    const double h2 = p.h * p.h;
    VecX out(4);
    out(0) = p.reduced_inertia() * (q.psi1 - q.psi0) / h2 +
             0.5 * p.potential.derivative(0.5 * (q.psi0 + q.psi1));
    out.segment<2>(1) = p.mass / h2 * q.g.translation;
    out(3) = (p.I1 + p.I2) / h2 * std::sin(q.omega3());
    return out;
  };
  return L;
}

BeanieGroupoid::Element beanie_step(const BeanieGroupoid::Element& q, const BeanieParams& p,
                                    const ScalarNewtonOptions& options) {
  const double dpsi = q.psi1 - q.psi0;
  const double angle = q.omega3() + p.coupling() * dpsi;
  const Vec2 omega12 = SE2::rotation(angle).rotation_matrix() * q.g.translation;

  // J (psi2 - 2 psi1 + psi0)/h^2 + (V'((psi2+psi1)/2) + V'((psi1+psi0)/2))/2 = 0
  const double a = p.reduced_inertia() / (p.h * p.h);
  const double old_force = p.potential.derivative(0.5 * (q.psi1 + q.psi0));
  double psi2 = 2.0 * q.psi1 - q.psi0;
  double r = 0.0;
  for (int iter = 0; iter < options.max_iters; ++iter) {
    const double mid = 0.5 * (psi2 + q.psi1);
    r = a * (psi2 - 2.0 * q.psi1 + q.psi0) + 0.5 * (p.potential.derivative(mid) + old_force);
    const double dr = a + 0.25 * p.potential.second_derivative(mid);
    if (dr == 0.0) throw SingularJacobian("beanie_step: zero derivative in psi update", std::numeric_limits<double>::infinity());
    const double step = r / dr;
    psi2 -= step;
    if (std::abs(step) <= options.tol * std::max(1.0, std::abs(psi2))) {
      BeanieGroupoid::Element next{q.psi1, psi2, SE2{q.g.angle, omega12}};
      return next;
    }
  }
  throw MaxItersExceeded("beanie_step: psi update did not converge, residual " + std::to_string(r),
                         options.max_iters, std::abs(r));
}

}  // namespace lgi

#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "lgi/geom.hpp"
#include "lgi/groupoid.hpp"

namespace lgi {

/// Potential V(psi) on the relative angle with its first two derivatives.
struct BeaniePotential {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::function<double(double)> second_derivative;
};

/// V(psi) = a (1 - cos psi).
BeaniePotential cosine_potential(double a);

struct BeanieParams {
  double mass = 1.0;
  double I1 = 1.0;
  double I2 = 1.0;
  double h = 0.1;
  BeaniePotential potential = cosine_potential(0.0);

  /// I2 / (I1 + I2): slope of the mechanical connection.
  double coupling() const { return I2 / (I1 + I2); }
  /// I1 I2 / (I1 + I2).
  double reduced_inertia() const { return I1 * I2 / (I1 + I2); }
};

/// Local chart U x U x SE(2) of the Atiyah groupoid (Q x Q)/SE(2) for
/// Q = SE(2) x S^1, built from the discrete connection
/// A(psi, psi') = Rot(c (psi' - psi)), c = I2/(I1 + I2):
///   ((x, y), g)((y, z), k) = ((x, z), g A(x,y)^-1 k A(y,z)^-1 A(x,z)),
///   ((x, y), g)^-1        = ((y, x), A(x,y) g^-1 A(y,x)).
/// An element is written through the reduced velocities
/// (psi_k, psi_{k+1}, Omega1, Omega2, Omega3) where g has translation
/// (Omega1, Omega2) and rotation angle -Omega3.
/// Fiber basis of A_x = T_xU x se(2): (d/dpsi, e1, e2, e3);
/// retract(x, (a, xi), t) = ((x, x + t a), exp_se2(t xi)).
class BeanieGroupoid {
public:
  struct Element {
    double psi0 = 0.0;
    double psi1 = 0.0;
    SE2 g;

    double omega1() const { return g.translation.x(); }
    double omega2() const { return g.translation.y(); }
    double omega3() const { return -g.angle; }
  };
  using Base = double;

  explicit BeanieGroupoid(double coupling);

  static Element from_velocities(double psi0, double psi1, double omega1, double omega2,
                                 double omega3);

  SE2 connection(double x, double y) const { return SE2::rotation(coupling_ * (y - x)); }

  Base source(const Element& g) const { return g.psi0; }
  Base target(const Element& g) const { return g.psi1; }
  Element identity(const Base& x) const { return {x, x, SE2::identity()}; }
  Element compose(const Element& g, const Element& h) const;
  Element invert(const Element& g) const;
  int fiber_dim() const { return 4; }
  std::vector<VecX> fiber_basis(const Base&) const { return canonical_fiber_basis(4); }
  Element retract(const Base& x, const VecX& v, double t) const;
  /// Chart (psi_k, psi_{k+1}, Omega1, Omega2, Omega3).
  int chart_dim() const { return 5; }
  VecX to_chart(const Element& g) const;
  Element from_chart(const VecX& c) const;
  double base_distance(const Base& a, const Base& b) const { return std::abs(a - b); }
  Element extrapolate(const Element& g) const { return {g.psi1, 2.0 * g.psi1 - g.psi0, g.g}; }

private:
  double coupling_;
};

/// Reduced discrete Lagrangian
///   m/(2h^2)(O1^2 + O2^2) + (I1+I2)/h^2 (1 - cos O3)
///   + (1/2) I1 I2/(I1+I2) ((psi' - psi)/h)^2 - V((psi + psi')/2).
/// Analytic hooks, with J = I1 I2/(I1+I2) and phi = c (psi' - psi):
///   F+L = (J (psi'-psi)/h^2 - V'/2, m/h^2 Rot(phi + O3)(O1, O2), (I1+I2)/h^2 sin O3),
///   F-L = (J (psi'-psi)/h^2 + V'/2, m/h^2 (O1, O2),               (I1+I2)/h^2 sin O3).
DiscreteLagrangian<BeanieGroupoid::Element> beanie_lagrangian(const BeanieParams& p);

struct ScalarNewtonOptions {
  int max_iters = 50;
  double tol = 1e-14;
};

/// Closed-form reduced DEL step q_k -> q_{k+1}:
///   (O1, O2) rotated by the angle O3 + c (psi_{k+1} - psi_k), O3 unchanged,
///   psi_{k+2} from the implicit midpoint relation, by scalar Newton.
BeanieGroupoid::Element beanie_step(const BeanieGroupoid::Element& q, const BeanieParams& p,
                                    const ScalarNewtonOptions& options = {});

}  // namespace lgi

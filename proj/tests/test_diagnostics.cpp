#include <doctest.h>

#include <cmath>

#include "lgi/diagnostics.hpp"
#include "lgi/models/heavy_top.hpp"
#include "lgi/models/lie_group_so3.hpp"
#include "lgi/models/moser_veselov.hpp"
#include "lgi/models/pair.hpp"
#include "lgi/models/rotation_pair.hpp"
#include "lgi/solver.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace lgi;

namespace {

using PairElement = PairGroupoid::Element;

CalculusConfig analytic_calculus() {
  CalculusConfig c;
  c.mode = DerivativeMode::analytic;
  return c;
}

NoetherSymmetry<VecX> translation(int dim, int i) {
  return {[dim, i](const VecX&) { return VecX(VecX::Unit(dim, i)); }, {}};
}

// Free particle plus an exact term V(y) - V(x), V(z) = |z|^2: translation along
// e_0 is a symmetry only up to the gauge f(z) = dV(z) e_0 = 2 z_0.
DiscreteLagrangian<PairElement> gauged_particle(double m, double h) {
  DiscreteLagrangian<PairElement> L;
  L.value = [m, h](const PairElement& g) {
    return 0.5 * m / h * (g.y - g.x).squaredNorm() + g.y.squaredNorm() - g.x.squaredNorm();
  };
  return L;
}

}  // namespace

TEST_CASE("noether_defect vanishes for symmetries and detects broken ones") {
  testing::Gen gen(51);
  const PairGroupoid gr(2);
  std::vector<PairElement> samples;
  for (int s = 0; s < 50; ++s) samples.push_back({gen.vec(2), gen.vec(2)});

  CHECK(noether_defect(gr, free_particle_lagrangian(1.5, 0.1), translation(2, 0), samples) < 1e-8);
  // The spring breaks translation invariance: the defect is k h/2 (x + y) . e.
  const auto ho = harmonic_oscillator_lagrangian(1.0, 4.0, 0.1);
  double expected = 0.0;
  for (const auto& g : samples) expected = std::max(expected, std::abs(0.2 * (g.x(1) + g.y(1))));
  CHECK(std::abs(noether_defect(gr, ho, translation(2, 1), samples) - expected) < 1e-8);

  auto X = translation(2, 0);
  CHECK(noether_defect(gr, gauged_particle(1.0, 0.1), X, samples) > 0.1);
  X.gauge = [](const VecX& z) { return 2.0 * z(0); };
  CHECK(noether_defect(gr, gauged_particle(1.0, 0.1), X, samples) < 1e-7);
}

TEST_CASE("gauged Noether constants are conserved along DEL trajectories") {
  const PairGroupoid gr(2);
  const auto L = gauged_particle(1.0, 0.1);
  NoetherSymmetry<VecX> X = translation(2, 0);
  X.gauge = [](const VecX& z) { return 2.0 * z(0); };
  const PairElement g0{Vec2(0.1, -0.3), Vec2(0.15, -0.25)};
  // The exact term cancels inside L, so differences are noisier than |L| suggests.
  NewtonConfig newton;
  newton.residual_tol = 1e-9;
  const auto traj = run_trajectory(gr, L, g0, 100, newton);
  const double c0 = noether_constant(gr, L, X, traj.elements.front());
  for (const auto& g : traj.elements) CHECK(std::abs(noether_constant(gr, L, X, g) - c0) < 1e-7);
}

TEST_CASE("heavy top Noether constant: differences, analytic maps and trace oracle") {
  testing::Gen gen(52);
  HeavyTopParams p;
  p.inertia = Vec3(0.6, 0.8, 1.1).asDiagonal();
  p.e = Vec3(0.2, 0.1, 1.0).normalized();
  const auto L = heavy_top_lagrangian(p);
  const ActionGroupoidHeavyTop gr;
  const NoetherSymmetry<Vec3> X{[](const Vec3& gamma) { return VecX(gamma); }, {}};
  std::vector<ActionGroupoidHeavyTop::Element> samples;
  for (int s = 0; s < 30; ++s) samples.push_back({gen.unit3(), gen.rotation(0.5)});
  CHECK(noether_defect(gr, L, X, samples) < 1e-7);
  for (const auto& g : samples) {
    // Gravity drops out of (F-L) . gamma, leaving the rigid-body part.
    const double oracle =
        oracle::heavy_top_right(g.gamma, g.W, p.inertia, p.h, p.mgl(), p.e).dot(g.gamma);
    CHECK(std::abs(noether_constant(gr, L, X, g, analytic_calculus()) - oracle) < 1e-12);
    CHECK(std::abs(noether_constant(gr, L, X, g) - oracle) < 1e-7);
    CHECK(std::abs(oracle - oracle::rigid_body_right(g.W, p.inertia, p.h).dot(g.gamma)) < 1e-12);
  }
}

TEST_CASE("make_conservation_report drift bookkeeping") {
  const auto rep = make_conservation_report({"a", "b", "c"}, {{2.0, 2.5, 1.0}, {0.0, 1e-3, -2e-3}, {}});
  CHECK(rep.max_abs_drift[0] == 1.0);
  CHECK(rep.max_rel_drift[0] == 0.5);
  CHECK(rep.max_abs_drift[1] == 2e-3);
  CHECK(rep.max_rel_drift[1] == 2e-3);  // reference 1 when the initial value is zero
  CHECK(rep.max_abs_drift[2] == 0.0);
  CHECK(rep.index("b") == 1);
  CHECK(rep.index("zzz") == 3);
  CHECK_THROWS_AS(make_conservation_report({"a"}, {}), PreconditionError);

  const std::vector<double> xs{1.0, -2.0, 3.0};
  const std::vector<std::pair<std::string, std::function<double(const double&)>>> q{
      {"square", [](const double& x) { return x * x; }}};
  const auto tracked = track_conserved(xs, q);
  CHECK(tracked.values[0] == std::vector<double>{1.0, 4.0, 9.0});
  CHECK(tracked.max_abs_drift[0] == 8.0);
}

TEST_CASE("symplectic_residual separates DEL flows from other maps") {
  testing::Gen gen(53);
  const PairGroupoid gr(2);
  // The free particle's DEL flow is exactly linear extrapolation.
  const auto free = free_particle_lagrangian(1.0, 0.1);
  const auto ho = harmonic_oscillator_lagrangian(1.0, 4.0, 0.1);
  const std::function<PairElement(const PairElement&)> extrapolate = [&](const PairElement& g) {
    return gr.extrapolate(g);
  };
  // (x, y) -> (y, 2y - 0.9x) scales dx^dy by 0.9.
  const std::function<PairElement(const PairElement&)> damped = [](const PairElement& g) {
    return PairElement{g.y, 2.0 * g.y - 0.9 * g.x};
  };
  const std::function<PairElement(const PairElement&)> ho_flow = [&](const PairElement& g) {
    return PairElement{g.y, oracle::ho_next(g.x, g.y, 1.0, 4.0, 0.1)};
  };
  for (int s = 0; s < 10; ++s) {
    const PairElement g{gen.vec(2), gen.vec(2)};
    CHECK(symplectic_residual(gr, free, g, extrapolate) < 1e-6);
    CHECK(symplectic_residual(gr, ho, g, ho_flow) < 1e-6);
    // Extrapolation preserves any constant form; the damped map does not.
    CHECK(symplectic_residual(gr, ho, g, extrapolate) < 1e-6);
    CHECK(symplectic_residual(gr, ho, g, damped) > 1.0);
  }
}

TEST_CASE("symplectic_residual for Moser-Veselov and rank failure") {
  const LieGroupSO3 gr;
  const Mat3 I = Vec3(0.6, 0.8, 1.1).asDiagonal();
  const auto L = free_rigid_body_lagrangian(I, 0.1);
  const Mat3 II = lagrangian_inertia(I);
  const std::function<Rotation(const Rotation&)> mv = [&](const Rotation& W) {
    MoserVeselovOptions o;
    o.tol = 1e-15;
    return rigid_body_step(W, II, o);
  };
  SymplecticConfig cfg;
  cfg.calculus = analytic_calculus();
  const Rotation W = oracle::rotation(Vec3(0.1, -0.2, 0.15));
  CHECK(symplectic_residual(gr, L, W, mv, cfg) < 1e-6);
  cfg.rank_tol = 2.0;
  CHECK_THROWS_AS(symplectic_residual(gr, L, W, mv, cfg), DecompositionError);
}

TEST_CASE("reduction_check on the rigid body") {
  const Mat3 I = Vec3(0.6, 0.8, 1.1).asDiagonal();
  const double h = 0.1;
  const RotationPairGroupoid up;
  const LieGroupSO3 down;
  NewtonConfig newton;
  newton.jacobian_mode = JacobianMode::model_analytic;
  newton.residual_tol = 1e-13;
  const auto L_up = rigid_body_pair_lagrangian(I, h);
  const auto L_down = free_rigid_body_lagrangian(I, h);
  const RotationPairGroupoid::Element g0{oracle::rotation(Vec3(0.4, 0.1, -0.3)),
                                         oracle::rotation(Vec3(0.4, 0.1, -0.3)) *
                                             oracle::rotation(Vec3(0.1, -0.2, 0.15))};
  const auto traj = run_trajectory(up, L_up, g0, 30, newton).elements;
  MoserVeselovOptions mv;
  mv.tol = 1e-15;
  std::vector<Rotation> reduced{reduce_left(g0)};
  while (reduced.size() < traj.size()) reduced.push_back(rigid_body_step(reduced.back(), lagrangian_inertia(I), mv));

  std::vector<std::tuple<RotationPairGroupoid::Element, RotationPairGroupoid::Element, VecX>> samples;
  testing::Gen gen(54);
  for (int s = 0; s < 20; ++s) {
    const auto [g, hh, k] = testing::rotation_pair_triple(gen);
    samples.emplace_back(g, hh, gen.vec(3));
  }
  const GroupoidMorphism<RotationPairGroupoid::Element, RotationPairGroupoid::Base, Rotation> phi{
      reduce_left, [](const RotationPairGroupoid::Base&, const VecX& v) { return v; }};
  const auto rep = reduction_check(up, down, phi, L_up, L_down, traj, reduced, samples, analytic_calculus());
  CHECK(rep.trajectory < 1e-10);
  CHECK(rep.pairing < 1e-10);
  CHECK(rep.value() == std::max(rep.trajectory, rep.pairing));

  auto shorter = reduced;
  shorter.pop_back();
  CHECK_THROWS_AS(reduction_check(up, down, phi, L_up, L_down, traj, shorter, samples), PreconditionError);
  const auto L_wrong = free_rigid_body_lagrangian(2.0 * I, h);
  CHECK_THROWS_AS(reduction_check(up, down, phi, L_up, L_wrong, traj, reduced, samples),
                  PreconditionError);
}

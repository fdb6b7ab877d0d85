#include <doctest.h>

#include <cmath>
#include <limits>

#include "lgi/groupoid.hpp"
#include "lgi/models/beanie.hpp"
#include "lgi/models/heavy_top.hpp"
#include "lgi/models/lie_group_so3.hpp"
#include "lgi/models/pair.hpp"
#include "lgi/models/rotation_pair.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace lgi;

static_assert(LieGroupoid<PairGroupoid>);
static_assert(LieGroupoid<LieGroupSO3>);
static_assert(LieGroupoid<ActionGroupoidHeavyTop>);
static_assert(LieGroupoid<BeanieGroupoid>);
static_assert(LieGroupoid<RotationPairGroupoid>);
static_assert(Extrapolating<PairGroupoid>);

namespace {

template <LieGroupoid G, class Triple>
double worst_axiom_defect(const G& gr, Triple make, testing::Gen& gen, int samples) {
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const auto [g, h, k] = make(gen);
    const VecX v = gen.vec(gr.fiber_dim());
    worst = std::max(worst, axiom_defect(gr, g, h, k, v, gen.uniform(-0.5, 0.5)));
  }
  return worst;
}

}  // namespace

TEST_CASE("groupoid axioms hold on random composable triples") {
  testing::Gen gen(21);
  CHECK(worst_axiom_defect(PairGroupoid(3), [](auto& g) { return testing::pair_triple(g, 3); },
                           gen, 200) < 1e-12);
  CHECK(worst_axiom_defect(LieGroupSO3{}, [](auto& g) { return testing::so3_triple(g); }, gen,
                           200) < 1e-12);
  CHECK(worst_axiom_defect(ActionGroupoidHeavyTop{},
                           [](auto& g) { return testing::heavy_top_triple(g); }, gen, 200) < 1e-12);
  CHECK(worst_axiom_defect(BeanieGroupoid(0.3), [](auto& g) { return testing::beanie_triple(g); },
                           gen, 200) < 1e-12);
  CHECK(worst_axiom_defect(RotationPairGroupoid{},
                           [](auto& g) { return testing::rotation_pair_triple(g); }, gen,
                           200) < 1e-12);
}

TEST_CASE("non-composable pairs are rejected") {
  const PairGroupoid gr(2);
  const PairGroupoid::Element g{VecX::Zero(2), VecX::Ones(2)};
  const PairGroupoid::Element h{VecX::Zero(2), VecX::Ones(2)};
  CHECK_THROWS_AS(gr.compose(g, h), ContractViolation);
  CHECK_THROWS_AS(require_composable(gr, g, h), ContractViolation);
  CHECK_THROWS_AS(del_residual(gr, free_particle_lagrangian(), g, h), ContractViolation);

  const ActionGroupoidHeavyTop top;
  const ActionGroupoidHeavyTop::Element a{Vec3::UnitZ(), exp_so3(Vec3(0.3, 0, 0))};
  CHECK_THROWS_AS(top.compose(a, a), ContractViolation);
  CHECK_NOTHROW(top.compose(a, top.identity(top.target(a))));

  const BeanieGroupoid beanie(0.5);
  CHECK_THROWS_AS(beanie.compose({0.0, 1.0, SE2{}}, {0.5, 1.0, SE2{}}), ContractViolation);
}

TEST_CASE("invariant derivatives of the harmonic oscillator match its gradients") {
  const double m = 1.3, k = 2.0, h = 0.1;
  const auto L = harmonic_oscillator_lagrangian(m, k, h);
  const PairGroupoid gr(2);
  testing::Gen gen(22);
  for (int s = 0; s < 50; ++s) {
    const VecX x = gen.vec(2), y = gen.vec(2);
    const PairGroupoid::Element g{x, y};
    const VecX plus = legendre_plus(gr, L, g).coords;
    const VecX minus = legendre_minus(gr, L, g).coords;
    // F+L = D2 L and F-L = -D1 L for the pair groupoid.
    CHECK((plus - oracle::ho_d2(x, y, m, k, h)).lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK((minus + oracle::ho_d1(x, y, m, k, h)).lpNorm<Eigen::Infinity>() < 1e-9);
    // The analytic hooks are exact.
    CalculusConfig analytic;
    analytic.mode = DerivativeMode::analytic;
    CHECK((legendre_plus(gr, L, g, analytic).coords - oracle::ho_d2(x, y, m, k, h)).norm() < 1e-13);
    CHECK((legendre_minus(gr, L, g, analytic).coords + oracle::ho_d1(x, y, m, k, h)).norm() < 1e-13);
  }
}

TEST_CASE("legendre maps are based at the right points") {
  const PairGroupoid gr(1);
  const PairGroupoid::Element g{VecX::Constant(1, 0.5), VecX::Constant(1, 2.0)};
  const auto L = free_particle_lagrangian(2.0, 0.5);
  CHECK(legendre_plus(gr, L, g).base(0) == 2.0);
  CHECK(legendre_minus(gr, L, g).base(0) == 0.5);
  // Free particle: both momenta equal m (y - x)/h.
  CHECK(std::abs(legendre_plus(gr, L, g).coords(0) - 6.0) < 1e-9);
  CHECK(std::abs(legendre_minus(gr, L, g).coords(0) - 6.0) < 1e-9);
}

TEST_CASE("del_residual is legendre_plus minus legendre_minus") {
  testing::Gen gen(23);
  const auto L = harmonic_oscillator_lagrangian(1.0, 3.0, 0.2);
  const PairGroupoid gr(3);
  for (int s = 0; s < 50; ++s) {
    const auto [g, h, k] = testing::pair_triple(gen, 3);
    const VecX r = del_residual(gr, L, g, h).coords;
    const VecX expected = legendre_plus(gr, L, g).coords - legendre_minus(gr, L, h).coords;
    CHECK((r - expected).lpNorm<Eigen::Infinity>() == 0.0);
  }
}

TEST_CASE("analytic mode without hooks is a precondition error") {
  CalculusConfig analytic;
  analytic.mode = DerivativeMode::analytic;
  BeanieParams p;
  DiscreteLagrangian<BeanieGroupoid::Element> L;
  L.value = beanie_lagrangian(p).value;
  const BeanieGroupoid gr(p.coupling());
  CHECK_THROWS_AS(legendre_plus(gr, L, gr.identity(0.0), analytic), PreconditionError);
  CHECK_FALSE(L.has_analytic());
  CHECK(beanie_lagrangian(p).has_analytic());
}

TEST_CASE("regularity matrix of the harmonic oscillator") {
  const double m = 1.5, k = 4.0, h = 0.1;
  const PairGroupoid gr(2);
  const auto L = harmonic_oscillator_lagrangian(m, k, h);
  const PairGroupoid::Element g{Vec2(0.3, -0.2), Vec2(0.1, 0.4)};
  // M_ij = -d^2 L / dx_i dy_j = (m/h + h k/4) delta_ij.
  const MatX expected = (m / h + 0.25 * h * k) * MatX::Identity(2, 2);
  const auto fd = regularity_matrix(gr, L, g);
  CHECK((fd.matrix - expected).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(std::abs(fd.condition - 1.0) < 1e-6);
  CalculusConfig analytic;
  analytic.mode = DerivativeMode::analytic;
  CHECK((regularity_matrix(gr, L, g, analytic).matrix - expected).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("separable Lagrangian is nowhere regular") {
  const PairGroupoid gr(2);
  const PairGroupoid::Element g{Vec2(1, 2), Vec2(-1, 0.5)};
  // Differences leave only roundoff, of order eps |L| / d^2.
  CHECK(regularity_matrix(gr, separable_lagrangian(), g).matrix.cwiseAbs().maxCoeff() < 1e-6);
  CalculusConfig analytic;
  analytic.mode = DerivativeMode::analytic;
  const auto info = regularity_matrix(gr, separable_lagrangian(), g, analytic);
  CHECK(info.matrix.cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::isinf(info.condition));
}

TEST_CASE("regularity matrix: finite differences agree with analytic hooks") {
  testing::Gen gen(24);
  HeavyTopParams p;
  p.inertia = Vec3(0.6, 0.8, 1.1).asDiagonal();
  const auto L = heavy_top_lagrangian(p);
  const ActionGroupoidHeavyTop gr;
  CalculusConfig analytic;
  analytic.mode = DerivativeMode::analytic;
  for (int s = 0; s < 10; ++s) {
    const ActionGroupoidHeavyTop::Element g{gen.unit3(), gen.rotation(0.5)};
    const MatX a = regularity_matrix(gr, L, g, analytic).matrix;
    const MatX f = regularity_matrix(gr, L, g).matrix;
    CHECK((a - f).cwiseAbs().maxCoeff() < 1e-6 * a.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("condition_number") {
  CHECK(std::abs(condition_number(Vec3(1, 2, 4).asDiagonal().toDenseMatrix()) - 4.0) < 1e-14);
  CHECK(std::isinf(condition_number(Vec3(1, 2, 0).asDiagonal().toDenseMatrix())));
  CHECK(condition_number(MatX(0, 0)) == 1.0);
}

TEST_CASE("omega_matrix and omega_L are antisymmetric") {
  testing::Gen gen(25);
  const PairGroupoid gr(2);
  const auto L = harmonic_oscillator_lagrangian(1.0, 2.0, 0.1);
  const PairGroupoid::Element g{gen.vec(2), gen.vec(2)};
  const MatX M = regularity_matrix(gr, L, g).matrix;
  const MatX W = omega_matrix(M);
  CHECK((W + W.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((W.topRightCorner(2, 2) + M).cwiseAbs().maxCoeff() == 0.0);
  for (int s = 0; s < 20; ++s) {
    const LiftVector u{gen.vec(2), gen.vec(2)}, w{gen.vec(2), gen.vec(2)};
    const double a = omega_L(gr, L, g, u, w);
    CHECK(std::abs(a + omega_L(gr, L, g, w, u)) < 1e-10);
    VecX uu(4), ww(4);
    uu << u.right, u.left;
    ww << w.right, w.left;
    CHECK(std::abs(a - uu.dot(W * ww)) < 1e-9);
  }
}

#pragma once

#include "lgi/geom.hpp"

namespace lgi {

/// The matrix II = Tr(I)/2 * Id - I that turns the kinetic energy
/// Omega.I.Omega/2 into Tr(Omega^ II Omega^T)/2.
Mat3 lagrangian_inertia(const Mat3& inertia);

/// Axial vector Pi of the antisymmetric matrix W II - II W^T.
Vec3 body_momentum(const Rotation& W, const Mat3& II);

struct MoserVeselovOptions {
  int max_iters = 50;
  /// Required accuracy of |vee(W II - II W^T) - Pi|_inf.
  double tol = 1e-10;
};

/// Solves Pi^ = W II - II W^T for W in SO(3) by Newton iteration on a unit
/// quaternion, starting at W_guess. The equation has several roots; the one
/// reached from W_guess is returned, which for W_guess close to the
/// physical solution is the branch nearest to it.
/// Throws PreconditionError if II is not symmetric positive definite and
/// MaxItersExceeded / SingularJacobian if Newton fails.
Rotation moser_veselov_solve(const Vec3& Pi, const Mat3& II, const Rotation& W_guess,
                             const MoserVeselovOptions& options = {});

}  // namespace lgi

#include "lgi/models/moser_veselov.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Geometry>

#include "lgi/error.hpp"
#include "lgi/groupoid.hpp"

namespace lgi {

Mat3 lagrangian_inertia(const Mat3& inertia) {
  return 0.5 * inertia.trace() * Mat3::Identity() - inertia;
}

Vec3 body_momentum(const Rotation& W, const Mat3& II) {
  return vee_antisymmetric_part(W * II - II * W.transpose());
}

namespace {

void require_spd(const Mat3& II) {
  const double scale = std::max(1.0, II.cwiseAbs().maxCoeff());
  if ((II - II.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw PreconditionError("moser_veselov_solve: II is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat3> eig(II);
  if (!(eig.eigenvalues().minCoeff() > 0.0)) {
    throw PreconditionError("moser_veselov_solve: II is not positive definite");
  }
}

Eigen::Quaterniond small_rotation(const Vec3& delta) {
  const double angle = delta.norm();
  if (angle < 1e-300) return Eigen::Quaterniond::Identity();
  return Eigen::Quaterniond(Eigen::AngleAxisd(angle, delta / angle));
}

}  // namespace

Rotation moser_veselov_solve(const Vec3& Pi, const Mat3& II, const Rotation& W_guess,
                             const MoserVeselovOptions& options) {
  require_spd(II);
  Eigen::Quaterniond q(W_guess);
  q.normalize();

  double previous = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter <= options.max_iters; ++iter) {
    const Rotation W = q.toRotationMatrix();
    const Vec3 r = body_momentum(W, II) - Pi;
    const double norm = r.lpNorm<Eigen::Infinity>();
    // Converged once accurate and no longer improving (roundoff floor).
    if (norm <= options.tol && (norm > 0.5 * previous || norm < 1e-15)) return W;
    if (iter == options.max_iters) break;
    previous = norm;

    Mat3 J;
    for (int j = 0; j < 3; ++j) {
      const Mat3 E = hat(Vec3::Unit(j));
      J.col(j) = vee_antisymmetric_part(W * E * II + II * E * W.transpose());
    }
    Eigen::FullPivLU<Mat3> lu(J);
    if (!lu.isInvertible()) {
      throw SingularJacobian("moser_veselov_solve: singular Jacobian", condition_number(MatX(J)));
    }
    q = q * small_rotation(-lu.solve(r));
    q.normalize();
  }
  const Vec3 r = body_momentum(q.toRotationMatrix(), II) - Pi;
  const double norm = r.lpNorm<Eigen::Infinity>();
  if (norm <= options.tol) return q.toRotationMatrix();
  throw MaxItersExceeded("moser_veselov_solve: no convergence, residual " + std::to_string(norm),
                         options.max_iters, norm);
}

}  // namespace lgi

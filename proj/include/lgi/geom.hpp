#pragma once

#include <Eigen/Dense>

namespace lgi {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

/// A 3x3 rotation matrix. The alias documents intent; use is_rotation() to
/// check the invariant R^T R = I, det R = 1.
using Rotation = Eigen::Matrix3d;

inline constexpr double kRotationTol = 1e-10;

/// hat(v) * w == v.cross(w).
Mat3 hat(const Vec3& v);

/// Inverse of hat. Throws PreconditionError unless A is antisymmetric within
/// 1e-10.
Vec3 vee(const Mat3& A);

/// Axial vector of the antisymmetric part of A, i.e. vee((A - A^T) / 2).
/// Never throws.
Vec3 vee_antisymmetric_part(const Mat3& A);

bool is_rotation(const Mat3& R, double tol = kRotationTol);

/// Rodrigues formula, with a Taylor branch below |v| = 1e-6.
Rotation exp_so3(const Vec3& v);

/// Principal logarithm. Throws SingularityError when trace(R) <= -1 + 1e-9,
/// where the axis is not determined smoothly.
Vec3 log_so3(const Rotation& R);

/// Nearest rotation in Frobenius norm (polar factor). Used to project
/// embedding coordinates back onto SO(3).
Rotation project_to_so3(const Mat3& M);

/// Adjoint action on so(3) in axial coordinates: hat(Ad_R xi) = R hat(xi) R^T.
Vec3 ad_so3(const Rotation& R, const Vec3& xi);

/// Coadjoint action with the convention <Ad*_R mu, xi> = <mu, Ad_R xi>,
/// so Ad*_{RS} = Ad*_S o Ad*_R.
Vec3 ad_star_so3(const Rotation& R, const Vec3& mu);

/// Element of SE(2). The rotation angle is kept as an unwrapped real so that
/// angle bookkeeping along a trajectory is exact.
struct SE2 {
  double angle = 0.0;
  Vec2 translation = Vec2::Zero();

  static SE2 identity() { return {}; }
  static SE2 rotation(double a) { return {a, Vec2::Zero()}; }

  Mat2 rotation_matrix() const;
  Mat3 matrix() const;
  SE2 operator*(const SE2& other) const;
  SE2 inverse() const;
};

/// Exponential of the se(2) element xi = xi1 e1 + xi2 e2 + xi3 e3 in the
/// basis e1 = E_13, e2 = E_23, e3 = E_12 - E_21. Note e3 generates the
/// rotation of angle -1, so exp(t e3) has angle -t.
SE2 exp_se2(const Vec3& xi);

/// Adjoint action on se(2) in the (e1, e2, e3) coordinates.
Vec3 ad_se2(const SE2& g, const Vec3& xi);

/// Coadjoint action on se(2)* in the dual coordinates, same convention as
/// ad_star_so3.
Vec3 ad_star_se2(const SE2& g, const Vec3& mu);

}  // namespace lgi

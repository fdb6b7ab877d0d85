#include "lgi/geom.hpp"

#include <algorithm>
#include <cmath>

#include "lgi/error.hpp"

namespace lgi {

Mat3 hat(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Vec3 vee(const Mat3& A) {
  if ((A + A.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw PreconditionError("vee: matrix is not antisymmetric");
  }
  return vee_antisymmetric_part(A);
}

Vec3 vee_antisymmetric_part(const Mat3& A) {
  return 0.5 * Vec3(A(2, 1) - A(1, 2), A(0, 2) - A(2, 0), A(1, 0) - A(0, 1));
}

bool is_rotation(const Mat3& R, double tol) {
  if (!R.allFinite()) return false;
  const double orth = (R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff();
  return orth <= tol && std::abs(R.determinant() - 1.0) <= tol;
}

Rotation exp_so3(const Vec3& v) {
  const double theta2 = v.squaredNorm();
  const double theta = std::sqrt(theta2);
  const Mat3 K = hat(v);
  double a;
  double b;
  if (theta < 1e-6) {
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  return Mat3::Identity() + a * K + b * K * K;
}

Vec3 log_so3(const Rotation& R) {
  const double tr = R.trace();
  if (tr <= -1.0 + 1e-9) {
    throw SingularityError("log_so3: rotation angle too close to pi");
  }
  const double c = std::clamp(0.5 * (tr - 1.0), -1.0, 1.0);
  const double theta = std::acos(c);
  const Vec3 w = vee_antisymmetric_part(R);  // = sin(theta) * axis
  if (theta < 1e-6) {
    return (1.0 + theta * theta / 6.0) * w;
  }
  return (theta / std::sin(theta)) * w;
}

Rotation project_to_so3(const Mat3& M) {
  Eigen::JacobiSVD<Mat3> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 U = svd.matrixU();
  const Mat3 V = svd.matrixV();
  if ((U * V.transpose()).determinant() < 0.0) U.col(2) *= -1.0;
  return U * V.transpose();
}

Vec3 ad_so3(const Rotation& R, const Vec3& xi) { return R * xi; }

Vec3 ad_star_so3(const Rotation& R, const Vec3& mu) { return R.transpose() * mu; }

Mat2 SE2::rotation_matrix() const {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Mat2 r;
  r << c, -s, s, c;
  return r;
}

Mat3 SE2::matrix() const {
  Mat3 m = Mat3::Identity();
  m.topLeftCorner<2, 2>() = rotation_matrix();
  m.topRightCorner<2, 1>() = translation;
  return m;
}

SE2 SE2::operator*(const SE2& other) const {
  return {angle + other.angle, translation + rotation_matrix() * other.translation};
}

SE2 SE2::inverse() const {
  return {-angle, -(rotation_matrix().transpose() * translation)};
}

namespace {

// Rotation generator: J v = (-v_y, v_x).
Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

}  // namespace

SE2 exp_se2(const Vec3& xi) {
  const double w = -xi.z();
  const Vec2 v = xi.head<2>();
  double a;
  double b;
  if (std::abs(w) < 1e-6) {
    a = 1.0 - w * w / 6.0;
    b = 0.5 * w - w * w * w / 24.0;
  } else {
    a = std::sin(w) / w;
    b = (1.0 - std::cos(w)) / w;
  }
  return {w, a * v + b * perp(v)};
}

Vec3 ad_se2(const SE2& g, const Vec3& xi) {
  // With w = -xi3: Ad_g (v, w) = (R v - w J q, w).
  const Vec2 v = g.rotation_matrix() * xi.head<2>() + xi.z() * perp(g.translation);
  return {v.x(), v.y(), xi.z()};
}

Vec3 ad_star_se2(const SE2& g, const Vec3& mu) {
  const Vec2 mv = g.rotation_matrix().transpose() * mu.head<2>();
  return {mv.x(), mv.y(), mu.z() + mu.head<2>().dot(perp(g.translation))};
}

}  // namespace lgi

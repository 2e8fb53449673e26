#pragma once

#include <cmath>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/LU>

namespace cvo {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;

/// Tangent coordinates of SE(3): rotational part first, then translational.
struct Twist {
  Vec3 omega = Vec3::Zero();  // rad
  Vec3 v = Vec3::Zero();      // m

  Twist() = default;
  Twist(const Vec3& omega_, const Vec3& v_) : omega(omega_), v(v_) {}

  static Twist from_vector(const Vec6& xi) { return {xi.head<3>(), xi.tail<3>()}; }
  Vec6 to_vector() const {
    Vec6 xi;
    xi << omega, v;
    return xi;
  }
  double norm() const { return std::sqrt(omega.squaredNorm() + v.squaredNorm()); }

  Twist operator*(double s) const { return {omega * s, v * s}; }
  Twist operator+(const Twist& o) const { return {omega + o.omega, v + o.v}; }
  Twist operator-(const Twist& o) const { return {omega - o.omega, v - o.v}; }
};

/// Rigid-body transform x -> R x + T.
struct Pose {
  Mat3 R = Mat3::Identity();
  Vec3 T = Vec3::Zero();

  Pose() = default;
  Pose(const Mat3& R_, const Vec3& T_) : R(R_), T(T_) {}

  static Pose identity() { return {}; }

  Eigen::Matrix4d matrix() const;
  static Pose from_matrix(const Eigen::Matrix4d& m);
};

Mat3 hat(const Vec3& w);

Pose exp(const Twist& xi);

/// Inverse of exp for rotation angles below pi - 1e-6; throws AngleNearPi otherwise.
Twist log(const Pose& h);

inline Vec3 apply(const Pose& h, const Vec3& x) { return h.R * x + h.T; }

/// a∘b, i.e. apply(compose(a, b), x) == apply(a, apply(b, x)).
/// The rotation is projected back onto SO(3) when it drifts by more than 1e-9.
Pose compose(const Pose& a, const Pose& b);

Pose invert(const Pose& h);

/// Nearest rotation in the Frobenius sense.
Mat3 orthonormalize(const Mat3& R);

/// Rotation angle in [0, pi]: atan2 of the skew part against the clamped
/// trace term, accurate near both 0 and pi.
double rotation_angle(const Mat3& R);

/// Adjoint of h acting on twists ordered (omega, v).
Eigen::Matrix<double, 6, 6> adjoint(const Pose& h);

}  // namespace cvo

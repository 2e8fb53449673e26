#include "cvo/lie.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/SVD>

#include "cvo/errors.hpp"

namespace cvo {

namespace {

constexpr double kSmallAngle = 1e-8;
constexpr double kSeriesAngle = 1e-2;
constexpr double kNearPiMargin = 1e-6;
constexpr double kOrthoTolerance = 1e-9;

Vec3 vee(const Mat3& A) { return {A(2, 1), A(0, 2), A(1, 0)}; }

// (1 - cos t) / t^2, written without cancellation.
double coeff_b(double theta) {
  if (theta < kSmallAngle) return 0.5;
  const double s = std::sin(0.5 * theta);
  return 2.0 * s * s / (theta * theta);
}

// (t - sin t) / t^3
double coeff_c(double theta) {
  if (theta < kSeriesAngle) {
    const double t2 = theta * theta;
    return 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
  }
  return (theta - std::sin(theta)) / (theta * theta * theta);
}

// (1 - t sin t / (2 (1 - cos t))) / t^2, the quadratic coefficient of V^-1.
double coeff_vinv(double theta) {
  if (theta < kSeriesAngle) {
    const double t2 = theta * theta;
    return 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0;
  }
  const double half = 0.5 * theta;
  return (1.0 - half * std::cos(half) / std::sin(half)) / (theta * theta);
}

}  // namespace

Eigen::Matrix4d Pose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = R;
  m.topRightCorner<3, 1>() = T;
  return m;
}

Pose Pose::from_matrix(const Eigen::Matrix4d& m) {
  return {m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>()};
}

Mat3 hat(const Vec3& w) {
  Mat3 W;
  W << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return W;
}

Pose exp(const Twist& xi) {
  const double theta = xi.omega.norm();
  const Mat3 W = hat(xi.omega);
  const Mat3 W2 = W * W;

  Mat3 R;
  if (theta < kSmallAngle) {
    R = Mat3::Identity() + W + 0.5 * W2;
  } else {
    R = Mat3::Identity() + (std::sin(theta) / theta) * W + coeff_b(theta) * W2;
  }
  const Mat3 V = Mat3::Identity() + coeff_b(theta) * W + coeff_c(theta) * W2;
  return {R, V * xi.v};
}

Twist log(const Pose& h) {
  const Mat3& R = h.R;
  const double cos_theta = 0.5 * (R.trace() - 1.0);
  const Vec3 axis_sin = 0.5 * vee(R - R.transpose());  // sin(theta) * n
  const double sin_theta = axis_sin.norm();
  const double theta = std::atan2(sin_theta, std::clamp(cos_theta, -1.0, 1.0));

  if (theta >= std::numbers::pi - kNearPiMargin) {
    throw AngleNearPi("log: rotation angle " + std::to_string(theta) + " is too close to pi");
  }

  Vec3 omega;
  if (theta < kSmallAngle) {
    omega = axis_sin;
  } else if (theta > std::numbers::pi - 1e-3) {
    // The antisymmetric part carries little information here; recover the axis
    // from (R + R^T)/2 - cos(theta) I = (1 - cos(theta)) n n^T.
    const Mat3 B = 0.5 * (R + R.transpose()) - cos_theta * Mat3::Identity();
    Eigen::Index k = 0;
    B.diagonal().maxCoeff(&k);
    Vec3 n = B.col(k).normalized();
    if (n.dot(axis_sin) < 0.0) n = -n;
    omega = theta * n;
  } else {
    omega = (theta / sin_theta) * axis_sin;
  }

  const Mat3 W = hat(omega);
  const Mat3 V_inv = Mat3::Identity() - 0.5 * W + coeff_vinv(theta) * (W * W);
  return {omega, V_inv * h.T};
}

Mat3 orthonormalize(const Mat3& R) {
  Eigen::JacobiSVD<Mat3> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 Q = svd.matrixU() * svd.matrixV().transpose();
  if (Q.determinant() < 0.0) {
    Mat3 U = svd.matrixU();
    U.col(2) = -U.col(2);
    Q = U * svd.matrixV().transpose();
  }
  return Q;
}

Pose compose(const Pose& a, const Pose& b) {
  Mat3 R = a.R * b.R;
  if ((R.transpose() * R - Mat3::Identity()).norm() > kOrthoTolerance) {
    R = orthonormalize(R);
  }
  return {R, a.R * b.T + a.T};
}

Pose invert(const Pose& h) {
  const Mat3 Rt = h.R.transpose();
  return {Rt, -Rt * h.T};
}

double rotation_angle(const Mat3& R) {
  const Vec3 axis(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  return std::atan2(0.5 * axis.norm(), std::clamp(0.5 * (R.trace() - 1.0), -1.0, 1.0));
}

Eigen::Matrix<double, 6, 6> adjoint(const Pose& h) {
  Eigen::Matrix<double, 6, 6> A = Eigen::Matrix<double, 6, 6>::Zero();
  A.topLeftCorner<3, 3>() = h.R;
  A.bottomLeftCorner<3, 3>() = hat(h.T) * h.R;
  A.bottomRightCorner<3, 3>() = h.R;
  return A;
}

}  // namespace cvo

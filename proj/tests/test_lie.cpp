#include <gtest/gtest.h>

#include <numbers>
#include <random>

#include "cvo/errors.hpp"
#include "cvo/lie.hpp"
#include "synthetic.hpp"

namespace cvo {
namespace {

constexpr double kPi = std::numbers::pi;

Twist random_twist(std::mt19937_64& rng, double max_omega, double max_v) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {testing::random_unit(rng) * (u(rng) * max_omega), testing::random_unit(rng) * (u(rng) * max_v)};
}

// Truncated power series of the matrix exponential, used as an independent
// reference for the closed form.
Eigen::Matrix4d series_exp(const Twist& xi) {
  Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
  A.block<3, 3>(0, 0) = hat(xi.omega);
  A.block<3, 1>(0, 3) = xi.v;
  Eigen::Matrix4d term = Eigen::Matrix4d::Identity();
  Eigen::Matrix4d sum = term;
  for (int k = 1; k < 60; ++k) {
    term = term * A / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

TEST(Lie, ExpOfZeroIsIdentity) {
  const Pose h = exp(Twist());
  EXPECT_TRUE(h.R.isIdentity(0.0));
  EXPECT_TRUE(h.T.isZero(0.0));
}

TEST(Lie, ExpQuarterTurnAboutZ) {
  const Pose h = exp(Twist(Vec3(0, 0, kPi / 2), Vec3::Zero()));
  Mat3 expected;
  expected << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  EXPECT_TRUE(h.R.isApprox(expected, 1e-15) || (h.R - expected).norm() < 1e-15);
  EXPECT_LT(h.T.norm(), 1e-15);
}

TEST(Lie, ExpMatchesMatrixSeries) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const Twist xi = random_twist(rng, 3.0, 5.0);
    EXPECT_LT((exp(xi).matrix() - series_exp(xi)).norm(), 1e-11);
  }
}

TEST(Lie, ExpTinyAngleUsesSeries) {
  const Twist xi(Vec3(1e-10, -2e-10, 3e-11), Vec3(0.1, 0.2, 0.3));
  EXPECT_LT((exp(xi).matrix() - series_exp(xi)).norm(), 1e-15);
}

TEST(Lie, LogOfIdentityIsZero) { EXPECT_EQ(log(Pose::identity()).norm(), 0.0); }

TEST(Lie, RoundTrip) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 200; ++t) {
    const Twist xi = random_twist(rng, 3.0, 10.0);
    EXPECT_LT((log(exp(xi)) - xi).norm(), 1e-9) << "trial " << t;
  }
}

TEST(Lie, RoundTripSmallAngles) {
  std::mt19937_64 rng(3);
  for (double a : {1e-12, 1e-9, 1e-7, 1e-5, 1e-3}) {
    const Twist xi(testing::random_unit(rng) * a, Vec3(0.3, -0.2, 0.1));
    EXPECT_LT((log(exp(xi)) - xi).norm(), 1e-12) << "angle " << a;
  }
}

TEST(Lie, LogNearPi) {
  const Vec3 axis = Vec3(1, 2, -0.5).normalized();
  for (double eps : {1e-3, 1e-4, 1e-5}) {
    // Rotation built directly from the axis-angle formula, not through exp.
    const double a = kPi - eps;
    const Mat3 K = hat(axis);
    const Mat3 R = Mat3::Identity() + std::sin(a) * K + (1 - std::cos(a)) * K * K;
    const Twist xi = log(Pose(R, Vec3(0.1, 0.2, 0.3)));
    EXPECT_NEAR(xi.omega.norm(), a, 1e-9);
    EXPECT_LT((xi.omega.normalized() - axis).norm(), 1e-6);
    EXPECT_LT((exp(xi).matrix() - Pose(R, Vec3(0.1, 0.2, 0.3)).matrix()).norm(), 1e-9);
  }
}

TEST(Lie, LogRejectsHalfTurn) {
  const Mat3 R = Vec3(-1, 1, -1).asDiagonal();
  EXPECT_THROW(log(Pose(R, Vec3::Zero())), AngleNearPi);
}

TEST(Lie, ApplyBasics) {
  const Vec3 x(0.3, -1, 2);
  EXPECT_EQ(apply(Pose::identity(), x), x);
  EXPECT_EQ(apply(Pose(Mat3::Identity(), Vec3(1, 0, 0)), Vec3::Zero()), Vec3(1, 0, 0));
}

TEST(Lie, InverseAndComposition) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const Pose a = exp(random_twist(rng, 3.0, 2.0));
    const Pose b = exp(random_twist(rng, 3.0, 2.0));
    const Vec3 x = testing::random_unit(rng) * 3.0;
    EXPECT_LT((apply(a, apply(invert(a), x)) - x).norm(), 1e-12);
    EXPECT_LT((compose(a, invert(a)).matrix() - Eigen::Matrix4d::Identity()).norm(), 1e-12);
    EXPECT_LT((compose(Pose::identity(), a).matrix() - a.matrix()).norm(), 1e-15);
    EXPECT_LT((apply(compose(a, b), x) - apply(a, apply(b, x))).norm(), 1e-12);
  }
}

TEST(Lie, ApplyIsIsometry) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 50; ++t) {
    const Pose h = exp(random_twist(rng, 3.0, 2.0));
    const Vec3 x = testing::random_unit(rng), z = testing::random_unit(rng) * 2.0;
    EXPECT_NEAR((apply(h, x) - apply(h, z)).norm(), (x - z).norm(), 1e-12);
  }
}

TEST(Lie, LongChainStaysOnManifold) {
  std::mt19937_64 rng(6);
  Pose h;
  for (int t = 0; t < 100000; ++t) h = compose(h, exp(random_twist(rng, 0.05, 0.01)));
  EXPECT_LT((h.R.transpose() * h.R - Mat3::Identity()).norm(), 1e-9);
  EXPECT_NEAR(h.R.determinant(), 1.0, 1e-9);
}

TEST(Lie, OrthonormalizeProjectsPerturbedRotation) {
  std::mt19937_64 rng(7);
  const Mat3 R = exp(random_twist(rng, 2.0, 0.0)).R;
  const Mat3 noisy = R + 1e-4 * Mat3::Random();
  const Mat3 P = orthonormalize(noisy);
  EXPECT_LT((P.transpose() * P - Mat3::Identity()).norm(), 1e-14);
  EXPECT_NEAR(P.determinant(), 1.0, 1e-14);
  EXPECT_LT((P - R).norm(), 1e-3);
}

TEST(Lie, AdjointConjugatesTwists) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const Pose g = exp(random_twist(rng, 2.0, 1.0));
    const Twist xi = random_twist(rng, 0.5, 0.5);
    const Pose lhs = compose(compose(g, exp(xi)), invert(g));
    const Pose rhs = exp(Twist::from_vector(adjoint(g) * xi.to_vector()));
    EXPECT_LT((lhs.matrix() - rhs.matrix()).norm(), 1e-12);
  }
}

TEST(Lie, RotationAngle) {
  EXPECT_EQ(rotation_angle(Mat3::Identity()), 0.0);
  EXPECT_NEAR(rotation_angle(exp(Twist(Vec3(0.3, 0, 0.4), Vec3::Zero())).R), 0.5, 1e-12);
}

}  // namespace
}  // namespace cvo

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cvo/errors.hpp"
#include "cvo/kernels.hpp"
#include "synthetic.hpp"

namespace cvo {
namespace {

TEST(Kernels, SpatialAtZeroDistance) {
  const Vec3 x(1, 2, 3);
  EXPECT_DOUBLE_EQ(spatial_kernel(x, x, 0.1, 0.1), 0.01);
}

TEST(Kernels, SpatialAtOneLengthScale) {
  const double k = spatial_kernel(Vec3::Zero(), Vec3(0.1, 0, 0), 0.1, 0.1);
  EXPECT_NEAR(k, 0.01 * std::exp(-0.5), 1e-17);
  EXPECT_NEAR(k, 6.0653e-3, 1e-7);
}

TEST(Kernels, SpatialSymmetricAndStationary) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const Vec3 x = testing::random_unit(rng) * 0.2, z = testing::random_unit(rng) * 0.1;
    const Pose h = testing::random_pose(3.0, 2.0, rng);
    const double k = spatial_kernel(x, z, 0.1, 0.1);
    EXPECT_EQ(k, spatial_kernel(z, x, 0.1, 0.1));
    EXPECT_NEAR(spatial_kernel(apply(h, x), apply(h, z), 0.1, 0.1), k, 1e-12);
    EXPECT_GT(k, 0.0);
    EXPECT_LE(k, 0.01);
  }
}

TEST(Kernels, ColorValues) {
  ColorLabel a = ColorLabel::Constant(0.5);
  EXPECT_DOUBLE_EQ(color_kernel(a, a, 1.0, 0.1), 1.0);
  ColorLabel b = a;
  b[2] += 0.1;
  EXPECT_NEAR(color_kernel(a, b, 1.0, 0.1), 0.60653, 1e-5);
}

TEST(Kernels, ColorMonotone) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ColorLabel a, dir;
  for (int d = 0; d < 5; ++d) {
    a[d] = u(rng);
    dir[d] = u(rng) - 0.5;
  }
  dir.normalize();
  double prev = color_kernel(a, a, 1.0, 0.1);
  for (double s = 0.01; s < 1.0; s += 0.01) {
    const double k = color_kernel(a, a + s * dir, 1.0, 0.1);
    EXPECT_LT(k, prev);
    prev = k;
  }
}

TEST(Kernels, SupportRadius) {
  EXPECT_NEAR(support_radius(0.1, std::exp(-0.5)), 0.1, 1e-15);
  EXPECT_NEAR(support_radius(0.1, 8.315e-3), 0.3096, 1e-4);
  EXPECT_LT(support_radius(0.1, 1.0 - 1e-12), 1e-6);
}

TEST(Kernels, SupportRadiusInvertsKernel) {
  for (double ell : {0.039, 0.1, 0.15}) {
    for (double tau : {1e-4, 8.315e-3, 0.3}) {
      const double r = support_radius(ell, tau);
      EXPECT_NEAR(spatial_kernel(Vec3::Zero(), Vec3(r, 0, 0), 0.1, ell), 0.01 * tau, 1e-12);
    }
  }
}

TEST(Kernels, ParamsValidate) {
  EXPECT_NO_THROW(KernelParams{}.validate());
  KernelParams p;
  p.tau = 1.0;
  EXPECT_THROW(p.validate(), InvalidConfig);
  p = {};
  p.ell = 0.0;
  EXPECT_THROW(p.validate(), InvalidConfig);
  p = {};
  p.sigma_c = -1.0;
  EXPECT_THROW(p.validate(), InvalidConfig);
}

}  // namespace
}  // namespace cvo

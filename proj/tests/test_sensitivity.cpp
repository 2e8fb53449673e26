#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "cvo/errors.hpp"
#include "cvo/kernels.hpp"
#include "cvo/sensitivity.hpp"

namespace cvo {
namespace {

// Last grid point where the truncation error exceeds tol, by a direct scan in
// extended precision.
long double scan_last_violation(int order, double tol, long double step) {
  long double last = 0.0L;
  for (long double s = 0.05L; s <= 100.0L; s += step) {
    long double partial = 0.0L, term = 1.0L;
    for (int m = 0; m <= order / 2; ++m) {
      partial += term;
      term *= -1.0L / (2.0L * (m + 1) * s * s);
    }
    const long double err = std::fabs(std::exp(-1.0L / (2.0L * s * s)) - partial);
    if (err > tol) last = s;
  }
  return last;
}

TEST(Sensitivity, GMatchesKernel) {
  for (double s : {0.3, 1.0, 2.5, 7.0}) {
    const double ell = 0.1;
    EXPECT_NEAR(0.01 * g(s), spatial_kernel(Vec3::Zero(), Vec3(ell / s, 0, 0), 0.1, ell), 1e-16);
  }
  EXPECT_NEAR(g(1.0), 0.606531, 1e-6);
  EXPECT_EQ(g(1e-3), 0.0);
  EXPECT_EQ(g(0.0), 0.0);
}

TEST(Sensitivity, PartialSums) {
  EXPECT_NEAR(laurent_approx(1.0, 6), 1 - 0.5 + 0.125 - 1.0 / 48, 1e-15);
  EXPECT_NEAR(laurent_approx(1.0, 6), 0.604167, 1e-6);
  EXPECT_NEAR(laurent_approx(2.0, 40), g(2.0), 1e-12);
  EXPECT_NEAR(laurent_approx(1e8, 6), 1.0, 1e-15);
  EXPECT_THROW(laurent_approx(1.0, 3), InvalidConfig);
  EXPECT_THROW(laurent_approx(1.0, 0), InvalidConfig);
}

TEST(Sensitivity, PartialSumsBracket) {
  for (double s = 1.0; s < 5.0; s += 0.25) {
    for (int order = 2; order <= 10; order += 4) {
      const double lo = laurent_approx(s, order);
      const double hi = laurent_approx(s, order + 2);
      EXPECT_LE(std::min(lo, hi), g(s));
      EXPECT_GE(std::max(lo, hi), g(s));
    }
  }
}

TEST(Sensitivity, ErrorAgreesWithDirectDifference) {
  for (double s : {0.8, 1.0, 1.5, 3.0}) {
    EXPECT_NEAR(laurent_error(s, 6), std::abs(g(s) - laurent_approx(s, 6)), 1e-14);
  }
}

TEST(Sensitivity, Anchor) {
  const CutoffEntry e = cutoff(6, 1e-3);
  EXPECT_NEAR(e.k_cut, 0.6694, 0.005);
  EXPECT_NEAR(e.k_cut, g(e.s_cut), 1e-15);
  EXPECT_NEAR(laurent_error(e.s_cut, 6), 1e-3, 1e-9);
}

TEST(Sensitivity, DenseGridOracle) {
  const long double step = 1e-4L;
  for (auto [order, tol] : {std::pair{2, 1e-2}, std::pair{4, 1e-3}, std::pair{6, 1e-3}, std::pair{8, 1e-4}}) {
    const long double oracle = scan_last_violation(order, tol, step);
    const CutoffEntry e = cutoff(order, tol);
    EXPECT_NEAR(e.s_cut, static_cast<double>(oracle), 2 * static_cast<double>(step))
        << "order " << order << " tol " << tol;
  }
}

TEST(Sensitivity, LooseToleranceCutsAlmostNothing) {
  const CutoffEntry e = cutoff(6, 0.5);
  EXPECT_LT(e.k_cut, 0.15);
  EXPECT_NEAR(e.s_cut, static_cast<double>(scan_last_violation(6, 0.5, 1e-4L)), 2e-4);
}

TEST(Sensitivity, TableMonotone) {
  const std::vector<int> orders{2, 4, 6, 8, 10};
  const std::vector<double> tols{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  const auto table = cutoff_table(orders, tols);
  ASSERT_EQ(table.size(), orders.size() * tols.size());
  auto at = [&](std::size_t o, std::size_t t) { return table[o * tols.size() + t].k_cut; };
  for (std::size_t o = 0; o < orders.size(); ++o) {
    for (std::size_t t = 0; t < tols.size(); ++t) {
      EXPECT_GT(at(o, t), 0.0);
      EXPECT_LT(at(o, t), 1.0);
      if (o + 1 < orders.size()) EXPECT_LE(at(o + 1, t), at(o, t));
      if (t + 1 < tols.size()) EXPECT_GE(at(o, t + 1), at(o, t));
    }
  }
}

TEST(Sensitivity, Errors) {
  EXPECT_THROW(cutoff(6, 0.0), InvalidConfig);
  EXPECT_THROW(cutoff(6, 1.0), InvalidConfig);
  EXPECT_THROW(cutoff(2, 1e-15), NotAchievable);
}

TEST(Sensitivity, TaylorAtZero) {
  const auto c = taylor_at_zero(8);
  ASSERT_EQ(c.size(), 9u);
  for (double v : c) EXPECT_EQ(v, 0.0);
  EXPECT_LT(std::pow(0.05, -10) * g(0.05), 1e-70);
  EXPECT_GT(g(1.0), 0.6);
}

TEST(Sensitivity, CsvHasAnchorRow) {
  std::ostringstream os;
  write_cutoff_csv(os, cutoff_table({6}, {1e-3}));
  std::istringstream is(os.str());
  std::string header, row;
  std::getline(is, header);
  std::getline(is, row);
  EXPECT_EQ(header, "order,tolerance,s_cut,k_cut");
  EXPECT_EQ(row.rfind("6,0.001,", 0), 0u);
  EXPECT_NEAR(std::stod(row.substr(row.rfind(',') + 1)), 0.6694, 0.005);
}

}  // namespace
}  // namespace cvo

#pragma once

#include <iosfwd>
#include <vector>

namespace cvo {

/// Kernel cutoff guaranteeing a truncation error bound for the expansion of
/// g about s = infinity.
struct CutoffEntry {
  int order = 0;           // highest retained power of 1/s
  double tolerance = 0.0;  // uniform error bound on [s_cut, inf)
  double s_cut = 0.0;      // normalized distance ell / |x - y|
  double k_cut = 0.0;      // g(s_cut), i.e. the cutoff as a fraction of sigma^2
};

/// Normalized spatial kernel g(s) = exp(-1 / (2 s^2)), s = ell / |x - y|; g(0) = 0.
double g(double s);

/// Partial sum of g's expansion at s = infinity through s^-order:
/// sum_{m=0}^{order/2} (-1)^m / (2^m m!) s^(-2m). order must be even and >= 2.
double laurent_approx(double s, int order);

/// |g(s) - laurent_approx(s, order)|, evaluated without cancellation for s >= 1/sqrt(2).
double laurent_error(double s, int order);

/// Smallest s_cut such that laurent_error(s, order) <= tolerance for every
/// s >= s_cut. A dense logarithmic scan over (0, 100] brackets the last
/// violation and bisection refines it. Throws NotAchievable when even s = 100
/// violates the bound.
CutoffEntry cutoff(int order, double tolerance);

std::vector<CutoffEntry> cutoff_table(const std::vector<int>& orders,
                                      const std::vector<double>& tolerances);

/// Taylor coefficients of g about s = 0 up to s^order. Every derivative of g
/// vanishes there, so the result is all zeros.
std::vector<double> taylor_at_zero(int order);

/// Writes "order,tolerance,s_cut,k_cut" rows with a header line.
void write_cutoff_csv(std::ostream& os, const std::vector<CutoffEntry>& entries);

}  // namespace cvo

#include "cvo/sensitivity.hpp"

#include <cmath>
#include <ostream>
#include <string>

#include "cvo/errors.hpp"

namespace cvo {

namespace {

constexpr double kScanMin = 1e-2;
constexpr double kScanMax = 100.0;
constexpr int kScanPoints = 20001;
constexpr int kBisections = 200;

void check_order(int order) {
  if (order < 2 || order % 2 != 0) {
    throw InvalidConfig("expansion order must be an even integer >= 2, got " + std::to_string(order));
  }
}

}  // namespace

double g(double s) {
  if (s == 0.0) return 0.0;
  return std::exp(-1.0 / (2.0 * s * s));
}

double laurent_approx(double s, int order) {
  check_order(order);
  const double x = -1.0 / (2.0 * s * s);
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m <= order / 2; ++m) {
    term *= x / m;
    sum += term;
  }
  return sum;
}

double laurent_error(double s, int order) {
  check_order(order);
  const double x = -1.0 / (2.0 * s * s);
  if (std::abs(x) > 1.0) return std::abs(g(s) - laurent_approx(s, order));

  // Sum the omitted tail of the exponential series directly.
  const int last = order / 2;
  double term = 1.0;
  for (int m = 1; m <= last; ++m) term *= x / m;
  double tail = 0.0;
  for (int m = last + 1; m < last + 200; ++m) {
    term *= x / m;
    tail += term;
    if (std::abs(term) <= 1e-20 * std::abs(tail)) break;
  }
  return std::abs(tail);
}

CutoffEntry cutoff(int order, double tolerance) {
  check_order(order);
  if (!(tolerance > 0.0 && tolerance < 1.0)) {
    throw InvalidConfig("cutoff tolerance must lie in (0, 1)");
  }
  if (laurent_error(kScanMax, order) > tolerance) {
    throw NotAchievable("tolerance " + std::to_string(tolerance) + " is not reachable by order " +
                        std::to_string(order) + " for s <= 100");
  }

  // Walk down from s = 100 to the first violation.
  const double log_lo = std::log(kScanMin);
  const double log_hi = std::log(kScanMax);
  double good = kScanMax;
  double bad = 0.0;
  for (int n = kScanPoints - 2; n >= 0; --n) {
    const double s = std::exp(log_lo + (log_hi - log_lo) * n / (kScanPoints - 1));
    if (laurent_error(s, order) > tolerance) {
      bad = s;
      break;
    }
    good = s;
  }

  if (bad > 0.0) {
    for (int it = 0; it < kBisections && good - bad > 1e-15 * good; ++it) {
      const double mid = 0.5 * (good + bad);
      if (laurent_error(mid, order) > tolerance) {
        bad = mid;
      } else {
        good = mid;
      }
    }
  }

  return {order, tolerance, good, g(good)};
}

std::vector<CutoffEntry> cutoff_table(const std::vector<int>& orders,
                                      const std::vector<double>& tolerances) {
  std::vector<CutoffEntry> table;
  table.reserve(orders.size() * tolerances.size());
  for (int order : orders) {
    for (double tol : tolerances) table.push_back(cutoff(order, tol));
  }
  return table;
}

std::vector<double> taylor_at_zero(int order) {
  if (order < 0) throw InvalidConfig("taylor_at_zero: order must be >= 0");
  return std::vector<double>(static_cast<std::size_t>(order) + 1, 0.0);
}

void write_cutoff_csv(std::ostream& os, const std::vector<CutoffEntry>& entries) {
  const auto old_flags = os.flags();
  const auto old_precision = os.precision();
  os.precision(10);
  os << "order,tolerance,s_cut,k_cut\n";
  for (const auto& e : entries) {
    os << e.order << ',' << e.tolerance << ',' << e.s_cut << ',' << e.k_cut << '\n';
  }
  os.flags(old_flags);
  os.precision(old_precision);
}

}  // namespace cvo

#include "cvo/rkhs.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "cvo/errors.hpp"
#include "cvo/parallel.hpp"
#include "cvo/voxel_grid.hpp"

namespace cvo {

namespace {

// Visits every surviving (i, j) for each query j of Zt. The grid is built over
// X; fn(j, i, d2, unit_kernel) is called from worker threads, one j at a time.
template <typename Fn>
void for_each_pair(const ColoredCloud& X, const ColoredCloud& Zt, const KernelParams& params,
                   Fn&& fn) {
  const double radius = support_radius(params.ell, params.tau);
  const double radius_sq = radius * radius * (1.0 + 1e-12);
  const double inv_two_ell_sq = 1.0 / (2.0 * params.ell * params.ell);
  const VoxelGrid grid(std::span<const Vec3>(X.points), radius);

  parallel_for(Zt.size(), [&](std::size_t j) {
    grid.for_each_within(Zt.points[j], radius_sq, [&](std::uint32_t i, double d2) {
      const double unit = std::exp(-d2 * inv_two_ell_sq);
      if (unit >= params.tau) fn(j, i, d2, unit);
    });
  });
}

}  // namespace

void ColoredCloud::validate() const {
  if (points.empty()) throw InvalidConfig("colored cloud is empty");
  if (points.size() != labels.size()) throw InvalidConfig("colored cloud: points/labels size mismatch");
  for (const auto& p : points) {
    if (!p.allFinite()) throw InvalidConfig("colored cloud: non-finite coordinate");
  }
}

ColoredCloud ColoredCloud::transformed(const Pose& h) const {
  ColoredCloud out;
  out.labels = labels;
  out.points.resize(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) out.points[j] = apply(h, points[j]);
  return out;
}

PairSet collect_pairs(const ColoredCloud& X, const ColoredCloud& Zt, const KernelParams& params) {
  std::vector<std::vector<Pair>> rows(Zt.size());
  const double s2 = params.sigma * params.sigma;
  for_each_pair(X, Zt, params, [&](std::size_t j, std::uint32_t i, double d2, double unit) {
    rows[j].push_back(Pair{i, static_cast<std::uint32_t>(j), d2, s2 * unit,
                           color_kernel(X.labels[i], Zt.labels[j], params.sigma_c, params.ell_c)});
  });

  PairSet out;
  out.ell_used = params.ell;
  std::size_t total = 0;
  for (const auto& r : rows) total += r.size();
  out.entries.reserve(total);
  for (const auto& r : rows) out.entries.insert(out.entries.end(), r.begin(), r.end());
  std::sort(out.entries.begin(), out.entries.end(), [](const Pair& a, const Pair& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  return out;
}

PairSet build_pairs(const ColoredCloud& X, const ColoredCloud& Zt, const KernelParams& params) {
  PairSet pairs = collect_pairs(X, Zt, params);
  if (pairs.empty()) {
    throw EmptyPairSet("no point pair within the kernel support radius " +
                       std::to_string(support_radius(params.ell, params.tau)) + " m");
  }
  return pairs;
}

double inner_product(const PairSet& pairs) {
  double sum = 0.0;
  for (const auto& p : pairs.entries) sum += p.c * p.k;
  return sum;
}

PairSums sum_pairs(const PairSet& pairs) {
  PairSums s;
  for (const auto& p : pairs.entries) {
    const double ck = p.c * p.k;
    s.ck += ck;
    s.ck_d2 += ck * p.d2;
  }
  s.count = pairs.size();
  return s;
}

PairSums pair_sums(const ColoredCloud& X, const ColoredCloud& Zt, const KernelParams& params) {
  std::vector<PairSums> rows(Zt.size());
  const double s2 = params.sigma * params.sigma;
  for_each_pair(X, Zt, params, [&](std::size_t j, std::uint32_t i, double d2, double unit) {
    const double ck = color_kernel(X.labels[i], Zt.labels[j], params.sigma_c, params.ell_c) * s2 * unit;
    PairSums& r = rows[j];
    r.ck += ck;
    r.ck_d2 += ck * d2;
    ++r.count;
  });
  PairSums total;
  for (const auto& r : rows) {
    total.ck += r.ck;
    total.ck_d2 += r.ck_d2;
    total.count += r.count;
  }
  return total;
}

double self_inner_product(const ColoredCloud& X, const KernelParams& params) {
  return pair_sums(X, X, params).ck;
}

CostTerms cost_terms(const ColoredCloud& X, const ColoredCloud& Z, const Pose& h,
                     const KernelParams& params) {
  CostTerms t;
  t.xz = pair_sums(X, Z.transformed(h), params);
  if (t.xz.count == 0) {
    throw EmptyPairSet("cost: clouds share no pair within the kernel support radius");
  }
  t.xx = pair_sums(X, X, params);
  t.zz = pair_sums(Z, Z, params);
  return t;
}

double cost(const ColoredCloud& X, const ColoredCloud& Z, const Pose& h, const KernelParams& params) {
  return cost_terms(X, Z, h, params).cost();
}

}  // namespace cvo

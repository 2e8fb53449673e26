#pragma once

#include <cstdint>
#include <vector>

#include "cvo/kernels.hpp"
#include "cvo/lie.hpp"

namespace cvo {

/// A point cloud together with its appearance labels; the coefficients of the
/// RKHS function the cloud induces.
struct ColoredCloud {
  std::vector<Vec3> points;
  std::vector<ColorLabel> labels;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  /// Throws InvalidConfig if empty, mismatched, or non-finite.
  void validate() const;

  /// Copy with every point mapped through h; labels are unchanged.
  ColoredCloud transformed(const Pose& h) const;
};

struct Pair {
  std::uint32_t i;  // index into the first cloud
  std::uint32_t j;  // index into the second cloud
  double d2;        // squared distance [m^2]
  double k;         // spatial kernel value
  double c;         // color kernel value
};

/// Sparsified cross pairs, sorted by (i, j).
struct PairSet {
  std::vector<Pair> entries;
  double ell_used = 0.0;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
};

/// Sums over a pair set: sum c*k and sum c*k*d^2.
struct PairSums {
  double ck = 0.0;
  double ck_d2 = 0.0;
  std::size_t count = 0;
};

/// Non-throwing variant of build_pairs; the result may be empty.
PairSet collect_pairs(const ColoredCloud& X, const ColoredCloud& Z_transformed,
                      const KernelParams& params);

/// Every (i, j) whose unit-variance spatial kernel is at least tau, with
/// k_ij = spatial_kernel and c_ij = color_kernel. Throws EmptyPairSet.
PairSet build_pairs(const ColoredCloud& X, const ColoredCloud& Z_transformed,
                    const KernelParams& params);

/// sum_ij c_ij k_ij, accumulated in (i, j) order.
double inner_product(const PairSet& pairs);

PairSums sum_pairs(const PairSet& pairs);

/// Same sums as sum_pairs(collect_pairs(...)) without materializing the pairs.
PairSums pair_sums(const ColoredCloud& X, const ColoredCloud& Z_transformed,
                   const KernelParams& params);

/// Squared RKHS norm of the cloud's function (diagonal included).
double self_inner_product(const ColoredCloud& X, const KernelParams& params);

/// Parts of J(h) = |f_X|^2 + |f_Z|^2 - 2 <f_X, h.f_Z>.
struct CostTerms {
  PairSums xx;
  PairSums zz;
  PairSums xz;

  double cost() const { return xx.ck + zz.ck - 2.0 * xz.ck; }
  /// dJ/d(ell) at the length-scale the sums were computed with.
  double ell_derivative(double ell) const {
    return (xx.ck_d2 + zz.ck_d2 - 2.0 * xz.ck_d2) / (ell * ell * ell);
  }
};

/// J(h) with Z moved by h before pairing. Throws EmptyPairSet when the cross
/// sum has no surviving pair.
double cost(const ColoredCloud& X, const ColoredCloud& Z, const Pose& h, const KernelParams& params);

CostTerms cost_terms(const ColoredCloud& X, const ColoredCloud& Z, const Pose& h,
                     const KernelParams& params);

}  // namespace cvo

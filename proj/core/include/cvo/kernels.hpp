#pragma once

#include <cmath>

#include <Eigen/Core>

#include "cvo/lie.hpp"

namespace cvo {

/// Appearance label of a point: normalized H, S, V followed by the two
/// normalized intensity-gradient magnitudes. Every component lies in [0, 1].
using ColorLabel = Eigen::Matrix<double, 5, 1>;

struct KernelParams {
  double sigma = 0.1;      // spatial signal std-dev
  double ell = 0.1;        // spatial length-scale [m]
  double sigma_c = 1.0;    // color signal std-dev
  double ell_c = 0.1;      // color length-scale (label space)
  double tau = 8.315e-3;   // cut on the unit-variance spatial kernel, in (0, 1)

  /// Throws InvalidConfig when any invariant is violated.
  void validate() const;

  KernelParams with_ell(double new_ell) const {
    KernelParams p = *this;
    p.ell = new_ell;
    return p;
  }
};

/// sigma^2 exp(-|x - z|^2 / (2 ell^2))
double spatial_kernel(const Vec3& x, const Vec3& z, double sigma, double ell);

/// Same kernel expressed through a precomputed squared distance.
inline double spatial_kernel_d2(double d2, double sigma, double ell) {
  return sigma * sigma * std::exp(-d2 / (2.0 * ell * ell));
}

double color_kernel(const ColorLabel& a, const ColorLabel& b, double sigma_c, double ell_c);

/// Distance beyond which exp(-d^2 / (2 ell^2)) < tau: ell * sqrt(-2 ln tau).
double support_radius(double ell, double tau);

}  // namespace cvo

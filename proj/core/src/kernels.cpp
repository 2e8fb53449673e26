#include "cvo/kernels.hpp"

#include <cmath>
#include <string>

#include "cvo/errors.hpp"

namespace cvo {

void KernelParams::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidConfig(std::string("kernel parameters: ") + what);
  };
  require(std::isfinite(sigma) && sigma > 0.0, "sigma must be > 0");
  require(std::isfinite(ell) && ell > 0.0, "ell must be > 0");
  require(std::isfinite(sigma_c) && sigma_c > 0.0, "sigma_c must be > 0");
  require(std::isfinite(ell_c) && ell_c > 0.0, "ell_c must be > 0");
  require(tau > 0.0 && tau < 1.0, "tau must lie in (0, 1)");
}

double spatial_kernel(const Vec3& x, const Vec3& z, double sigma, double ell) {
  return spatial_kernel_d2((x - z).squaredNorm(), sigma, ell);
}

double color_kernel(const ColorLabel& a, const ColorLabel& b, double sigma_c, double ell_c) {
  return sigma_c * sigma_c * std::exp(-(a - b).squaredNorm() / (2.0 * ell_c * ell_c));
}

double support_radius(double ell, double tau) { return ell * std::sqrt(-2.0 * std::log(tau)); }

}  // namespace cvo

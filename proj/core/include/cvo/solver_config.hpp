#pragma once

#include "cvo/kernels.hpp"

namespace cvo {

/// Solver and length-scale schedule parameters. Defaults are the values used
/// for the TUM RGB-D evaluation.
struct SolverConfig {
  double eps_transform = 1e-5;  // stop when the accepted twist norm falls below this
  double eps_gradient = 5e-5;   // stop when the pose gradient norm falls below this
  double min_step = 0.2;        // floor of the line-search multiplier
  int max_iterations = 500;

  KernelParams kernel{};  // kernel.ell is ignored; the schedule below owns the length-scale

  double ell_init = 0.1;
  double ell_min = 0.039;
  double ell_max = 0.15;
  double gamma_ell = 0.3;   // length-scale integration step
  double lambda_ell = 0.7;  // reduction factor applied to ell and its ceiling

  bool adaptive = true;  // false: keep ell fixed at ell_init

  // Length-scale gradients below this magnitude for weak_gradient_patience
  // consecutive iterations force one reduction and raise a tracking warning.
  double weak_gradient_threshold = 1e-12;
  int weak_gradient_patience = 3;

  /// Throws InvalidConfig when any invariant is violated.
  void validate() const;
};

}  // namespace cvo

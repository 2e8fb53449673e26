#pragma once

#include "cvo/lie.hpp"
#include "cvo/rkhs.hpp"
#include "cvo/solver_config.hpp"

namespace cvo {

/// Length-scale state of one registration.
struct EllState {
  double ell = 0.1;
  double ell_max_current = 0.15;  // ceiling, only ever lowered
  bool pinned_low = false;        // ell was clamped at ell_min at least once

  static EllState initial(const SolverConfig& config) {
    return {config.ell_init, config.ell_max, false};
  }
};

struct EllGradient {
  double value = 0.0;
  bool empty = false;  // some pair set was empty; value is 0
};

/// dJ/d(ell) = (1/ell^3) [sum a p k + sum b q k - 2 sum c r k], where p, q, r
/// are the squared distances of the self and cross pairs. All three sums use
/// the sparsification radius of the given ell.
EllGradient ell_gradient(const ColoredCloud& X, const ColoredCloud& Z, const Pose& h, double ell,
                         const KernelParams& params);

/// One descent step ell - gamma * grad, followed by the ceiling reduction when
/// the candidate reaches the ceiling and a clamp to [ell_min, ceiling].
EllState update_ell(const EllState& state, double grad, const SolverConfig& config);

/// Multiplies both ell and its ceiling by lambda_ell, respecting ell_min.
EllState reduce_ell(const EllState& state, const SolverConfig& config);

}  // namespace cvo

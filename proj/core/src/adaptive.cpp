#include "cvo/adaptive.hpp"

#include <algorithm>
#include <cmath>

namespace cvo {

EllGradient ell_gradient(const ColoredCloud& X, const ColoredCloud& Z, const Pose& h, double ell,
                         const KernelParams& params) {
  const KernelParams p = params.with_ell(ell);
  CostTerms terms;
  terms.xz = pair_sums(X, Z.transformed(h), p);
  terms.xx = pair_sums(X, X, p);
  terms.zz = pair_sums(Z, Z, p);
  if (terms.xz.count == 0 || terms.xx.count == 0 || terms.zz.count == 0) {
    return {0.0, true};
  }
  return {terms.ell_derivative(ell), false};
}

EllState update_ell(const EllState& state, double grad, const SolverConfig& config) {
  EllState next = state;
  if (!std::isfinite(grad)) grad = 0.0;
  double candidate = state.ell - config.gamma_ell * grad;
  if (candidate >= state.ell_max_current) {
    candidate *= config.lambda_ell;
    // The ceiling never drops below ell_min.
    next.ell_max_current = std::max(config.lambda_ell * state.ell_max_current, config.ell_min);
  }
  if (candidate <= config.ell_min) {
    candidate = config.ell_min;
    next.pinned_low = true;
  }
  next.ell = std::min(candidate, next.ell_max_current);
  return next;
}

EllState reduce_ell(const EllState& state, const SolverConfig& config) {
  EllState next = state;
  next.ell_max_current = std::max(config.lambda_ell * state.ell_max_current, config.ell_min);
  next.ell = std::clamp(config.lambda_ell * state.ell, config.ell_min, next.ell_max_current);
  if (next.ell <= config.ell_min) next.pinned_low = true;
  return next;
}

}  // namespace cvo

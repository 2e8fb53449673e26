#pragma once

#include <functional>
#include <vector>

#include "cvo/adaptive.hpp"
#include "cvo/lie.hpp"
#include "cvo/rkhs.hpp"
#include "cvo/solver_config.hpp"

namespace cvo {

/// One row of the per-iteration diagnostics stream.
struct IterationRecord {
  int iteration = 0;
  double ell = 0.0;              // length-scale used for this iteration's pose step
  double ell_max_current = 0.0;  // ceiling in effect during the step
  double ell_gradient = 0.0;     // dJ/d(ell) at the updated pose
  double inner_product = 0.0;    // F after the step
  double cost = 0.0;             // J after the step
  double gradient_norm = 0.0;    // pose gradient norm before the step
  double step_norm = 0.0;        // norm of the accepted twist
  double step_multiplier = 0.0;  // accepted line-search multiplier (0 if no step)
};

struct RegistrationResult {
  Pose pose;  // maps the second cloud into the frame of the first
  int iterations = 0;
  double final_ell = 0.0;
  bool converged = false;
  bool tracking_warning = false;
  double final_cost = 0.0;
  double final_inner_product = 0.0;
  std::vector<IterationRecord> trace;
};

struct StepDiagnostics {
  double inner_product_before = 0.0;
  double inner_product_after = 0.0;
  double gradient_norm = 0.0;
  double step_norm = 0.0;
  double multiplier = 0.0;
  bool zero_gradient = false;  // gradient norm below eps_gradient; no step taken
  bool stalled = false;        // no multiplier >= min_step increased F
  bool converged = false;      // zero_gradient, stalled, or step_norm < eps_transform
};

struct StepResult {
  Pose pose;
  Twist gradient;
  Twist step;  // accepted twist; pose = exp(step) ∘ previous pose
  StepDiagnostics diagnostics;
  PairSums cross_sums;  // cross sums at the returned pose and the step's ell
};

/// Left-perturbation gradient of F at h. With z'_j = h z_j and
/// w_ij = c_ij k_ij / ell^2:
///   dF/dv     = sum w_ij (x_i - z'_j)
///   dF/domega = sum w_ij z'_j x (x_i - z'_j)
/// `pairs` must have been built between X and h·Z.
Twist pose_gradient(const ColoredCloud& X, const ColoredCloud& Z, const Pose& h,
                    const PairSet& pairs, const KernelParams& params);

/// One ascent iteration at fixed ell: gradient, metric-scaled direction and a
/// backtracking line search on F (Armijo, halving, multiplier floor min_step).
/// Throws EmptyPairSet when the clouds share no pair at h.
StepResult step(const ColoredCloud& X, const ColoredCloud& Z, const Pose& h, double ell,
                const SolverConfig& config);

/// Maximizes F over SE(3), interleaving pose steps with length-scale updates.
/// The returned pose h satisfies h·Z ≈ X. Throws RegistrationFailed when the
/// clouds share no pair even at ell_max.
RegistrationResult register_clouds(const ColoredCloud& X, const ColoredCloud& Z,
                                   const SolverConfig& config, const Pose& h_init = Pose::identity());

}  // namespace cvo

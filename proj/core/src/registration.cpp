#include "cvo/registration.hpp"

#include <cmath>
#include <optional>
#include <string>

#include <Eigen/Cholesky>

#include "cvo/errors.hpp"

namespace cvo {

namespace {

using Mat6 = Eigen::Matrix<double, 6, 6>;

constexpr double kArmijo = 1e-4;
constexpr double kShrink = 0.5;

struct GradientAndMetric {
  Vec6 gradient = Vec6::Zero();
  Mat6 metric = Mat6::Zero();
  double weight = 0.0;
};

// Gradient of F plus the weighted point-to-point metric sum_j W_j J_j^T J_j,
// where J_j maps a twist to the displacement of z'_j.
GradientAndMetric gradient_and_metric(const ColoredCloud& X, const ColoredCloud& Zt,
                                      const PairSet& pairs, double ell) {
  GradientAndMetric out;
  const double inv_ell_sq = 1.0 / (ell * ell);
  std::vector<double> point_weight(Zt.size(), 0.0);
  for (const auto& p : pairs.entries) {
    const double w = p.c * p.k * inv_ell_sq;
    const Vec3& z = Zt.points[p.j];
    const Vec3 diff = X.points[p.i] - z;
    out.gradient.head<3>() += w * z.cross(diff);
    out.gradient.tail<3>() += w * diff;
    point_weight[p.j] += w;
  }
  for (std::size_t j = 0; j < Zt.size(); ++j) {
    const double W = point_weight[j];
    if (W == 0.0) continue;
    Eigen::Matrix<double, 3, 6> J;
    J.leftCols<3>() = -hat(Zt.points[j]);
    J.rightCols<3>().setIdentity();
    out.metric.noalias() += W * (J.transpose() * J);
    out.weight += W;
  }
  return out;
}

Vec6 ascent_direction(const GradientAndMetric& gm) {
  Eigen::LDLT<Mat6> ldlt(gm.metric);
  if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
    Vec6 d = ldlt.solve(gm.gradient);
    if (d.allFinite() && d.dot(gm.gradient) > 0.0) return d;
  }
  // Degenerate geometry (e.g. a single surviving pair): plain scaled gradient.
  return gm.gradient / std::max(gm.weight, 1e-300);
}

Pose perturb(const Pose& h, const Vec6& xi) { return compose(exp(Twist::from_vector(xi)), h); }

}  // namespace

void SolverConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidConfig(std::string("solver configuration: ") + what);
  };
  kernel.validate();
  require(eps_transform > 0.0, "eps_transform must be > 0");
  require(eps_gradient > 0.0, "eps_gradient must be > 0");
  require(min_step > 0.0 && min_step <= 1.0, "min_step must lie in (0, 1]");
  require(max_iterations > 0, "max_iterations must be positive");
  require(ell_min > 0.0, "ell_min must be > 0");
  require(ell_min < ell_init, "ell_min must be < ell_init");
  require(ell_init <= ell_max, "ell_init must be <= ell_max");
  require(lambda_ell > 0.0 && lambda_ell < 1.0, "lambda_ell must lie in (0, 1)");
  require(gamma_ell >= 0.0, "gamma_ell must be >= 0");
  require(weak_gradient_patience > 0, "weak_gradient_patience must be positive");
}

Twist pose_gradient(const ColoredCloud& X, const ColoredCloud& Z, const Pose& h,
                    const PairSet& pairs, const KernelParams& params) {
  const ColoredCloud Zt = Z.transformed(h);
  return Twist::from_vector(gradient_and_metric(X, Zt, pairs, params.ell).gradient);
}

StepResult step(const ColoredCloud& X, const ColoredCloud& Z, const Pose& h, double ell,
                const SolverConfig& config) {
  const KernelParams params = config.kernel.with_ell(ell);
  const ColoredCloud Zt = Z.transformed(h);
  const PairSet pairs = build_pairs(X, Zt, params);
  const GradientAndMetric gm = gradient_and_metric(X, Zt, pairs, ell);

  StepResult out;
  out.pose = h;
  out.gradient = Twist::from_vector(gm.gradient);
  out.cross_sums = sum_pairs(pairs);

  StepDiagnostics& diag = out.diagnostics;
  diag.inner_product_before = out.cross_sums.ck;
  diag.inner_product_after = out.cross_sums.ck;
  diag.gradient_norm = gm.gradient.norm();

  if (diag.gradient_norm < config.eps_gradient) {
    diag.zero_gradient = true;
    diag.converged = true;
    return out;
  }

  const Vec6 direction = ascent_direction(gm);
  const double slope = gm.gradient.dot(direction);
  const double f0 = diag.inner_product_before;

  struct Candidate {
    double t;
    Pose pose;
    PairSums sums;
  };
  std::optional<Candidate> best;
  std::optional<Candidate> accepted;

  double t = 1.0;
  while (true) {
    const Pose trial = perturb(h, t * direction);
    const PairSums sums = pair_sums(X, Z.transformed(trial), params);
    Candidate cand{t, trial, sums};
    if (!best || sums.ck > best->sums.ck) best = cand;
    if (sums.ck >= f0 + kArmijo * t * slope) {
      accepted = cand;
      break;
    }
    if (t <= config.min_step) break;
    t = std::max(t * kShrink, config.min_step);
  }
  if (!accepted && best && best->sums.ck > f0) accepted = best;

  if (!accepted) {
    diag.stalled = true;
    diag.converged = true;
    return out;
  }

  out.pose = accepted->pose;
  out.step = Twist::from_vector(accepted->t * direction);
  out.cross_sums = accepted->sums;
  diag.multiplier = accepted->t;
  diag.step_norm = out.step.norm();
  diag.inner_product_after = accepted->sums.ck;
  diag.converged = diag.step_norm < config.eps_transform;
  return out;
}

RegistrationResult register_clouds(const ColoredCloud& X, const ColoredCloud& Z,
                                   const SolverConfig& config, const Pose& h_init) {
  config.validate();
  X.validate();
  Z.validate();

  RegistrationResult result;
  result.pose = h_init;
  EllState state = EllState::initial(config);

  // Self sums depend on ell only; cache the most recent pair of them.
  double cached_ell = -1.0;
  PairSums self_x;
  PairSums self_z;
  auto self_sums = [&](double ell) {
    if (ell != cached_ell) {
      const KernelParams p = config.kernel.with_ell(ell);
      self_x = pair_sums(X, X, p);
      self_z = pair_sums(Z, Z, p);
      cached_ell = ell;
    }
  };

  int weak_streak = 0;
  for (int k = 0; k < config.max_iterations; ++k) {
    StepResult s;
    try {
      s = step(X, Z, result.pose, state.ell, config);
    } catch (const EmptyPairSet&) {
      const KernelParams widest = config.kernel.with_ell(config.ell_max);
      if (pair_sums(X, Z.transformed(result.pose), widest).count == 0) {
        throw RegistrationFailed("registration failed: clouds do not overlap at ell_max = " +
                                 std::to_string(config.ell_max) + " m");
      }
      result.tracking_warning = true;
      break;
    }

    result.pose = s.pose;
    result.iterations = k + 1;
    result.final_ell = state.ell;

    self_sums(state.ell);
    CostTerms terms{self_x, self_z, s.cross_sums};
    const double dj_dell = terms.ell_derivative(state.ell);
    result.final_inner_product = terms.xz.ck;
    result.final_cost = terms.cost();

    IterationRecord rec;
    rec.iteration = k;
    rec.ell = state.ell;
    rec.ell_max_current = state.ell_max_current;
    rec.ell_gradient = dj_dell;
    rec.inner_product = terms.xz.ck;
    rec.cost = terms.cost();
    rec.gradient_norm = s.diagnostics.gradient_norm;
    rec.step_norm = s.diagnostics.step_norm;
    rec.step_multiplier = s.diagnostics.multiplier;
    result.trace.push_back(rec);

    if (s.diagnostics.converged) {
      result.converged = true;
      break;
    }

    if (config.adaptive) {
      if (std::abs(dj_dell) < config.weak_gradient_threshold) {
        if (++weak_streak >= config.weak_gradient_patience) {
          state = reduce_ell(state, config);
          result.tracking_warning = true;
          weak_streak = 0;
        }
      } else {
        weak_streak = 0;
        state = update_ell(state, dj_dell, config);
      }
    }
  }

  result.final_ell = result.trace.empty() ? state.ell : result.final_ell;
  return result;
}

}  // namespace cvo

#include "cvo/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>

#include <Eigen/Geometry>

#include "cvo/errors.hpp"

namespace cvo {

namespace {

// Index of the stamp closest to t, or npos if none lies within max_dt.
std::size_t closest_within(const std::vector<StampedPose>& poses, double t, double max_dt) {
  auto it = std::lower_bound(poses.begin(), poses.end(), t,
                             [](const StampedPose& p, double v) { return p.timestamp < v; });
  std::size_t best = std::string::npos;
  double best_dt = max_dt;
  auto consider = [&](std::vector<StampedPose>::const_iterator c) {
    const double dt = std::abs(c->timestamp - t);
    if (dt <= best_dt) {
      best_dt = dt;
      best = static_cast<std::size_t>(c - poses.begin());
    }
  };
  if (it != poses.end()) consider(it);
  if (it != poses.begin()) consider(std::prev(it));
  return best;
}

std::string shortest(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

Trajectory accumulate(const std::vector<Pose>& relative, const std::vector<double>& timestamps) {
  if (timestamps.size() != relative.size() + 1) {
    throw InvalidConfig("accumulate: need exactly one more timestamp than relative poses");
  }
  Trajectory traj;
  traj.poses.reserve(timestamps.size());
  Pose current = Pose::identity();
  traj.poses.push_back({timestamps[0], current});
  for (std::size_t k = 0; k < relative.size(); ++k) {
    if (!(timestamps[k + 1] > timestamps[k])) throw InvalidConfig("accumulate: timestamps must increase");
    current = compose(current, relative[k]);
    traj.poses.push_back({timestamps[k + 1], current});
  }
  return traj;
}

RpeResult rpe(const Trajectory& estimated, const Trajectory& reference, double delta, double max_dt) {
  if (estimated.size() < 2 || reference.size() < 2) {
    throw NoOverlap("rpe: both trajectories need at least two poses");
  }
  if (!(delta > 0.0)) throw InvalidConfig("rpe: delta must be positive");

  const auto& est = estimated.poses;
  const auto& ref = reference.poses;

  RpeResult out;
  double sum_t = 0.0;
  double sum_r = 0.0;
  for (std::size_t i = 0; i < est.size(); ++i) {
    const std::size_t qi = closest_within(ref, est[i].timestamp, max_dt);
    if (qi == std::string::npos) continue;
    const std::size_t j = closest_within(est, est[i].timestamp + delta, max_dt);
    if (j == std::string::npos || j <= i) continue;
    const std::size_t qj = closest_within(ref, est[j].timestamp, max_dt);
    if (qj == std::string::npos) continue;

    const Pose est_rel = compose(invert(est[i].pose), est[j].pose);
    const Pose ref_rel = compose(invert(ref[qi].pose), ref[qj].pose);
    const Pose E = compose(invert(ref_rel), est_rel);

    RpeResidual r;
    r.t_start = est[i].timestamp;
    r.t_end = est[j].timestamp;
    r.translation = E.T.norm() / delta;
    r.rotation = rotation_angle(E.R) * 180.0 / std::numbers::pi / delta;
    sum_t += r.translation * r.translation;
    sum_r += r.rotation * r.rotation;
    out.residuals.push_back(r);
  }

  if (out.residuals.size() < 2) {
    throw NoOverlap("rpe: fewer than two " + std::to_string(delta) + " s intervals overlap");
  }
  const double n = static_cast<double>(out.residuals.size());
  out.trans_rmse = std::sqrt(sum_t / n);
  out.rot_rmse = std::sqrt(sum_r / n);
  return out;
}

std::string format_trajectory_line(const StampedPose& p) {
  Eigen::Quaterniond q(p.pose.R);
  q.normalize();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();

  char stamp[64];
  std::snprintf(stamp, sizeof(stamp), "%.6f", p.timestamp);
  std::string line = stamp;
  for (double v : {p.pose.T.x(), p.pose.T.y(), p.pose.T.z(), q.x(), q.y(), q.z(), q.w()}) {
    line += ' ';
    line += shortest(v);
  }
  return line;
}

void write_trajectory(const Trajectory& trajectory, std::ostream& os) {
  for (const auto& p : trajectory.poses) os << format_trajectory_line(p) << '\n';
}

void write_trajectory(const Trajectory& trajectory, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw MissingFile("cannot write " + path.string());
  write_trajectory(trajectory, out);
}

Trajectory read_trajectory(const std::filesystem::path& path) { return {parse_pose_list(path)}; }

void write_rpe_csv(const RpeResult& result, std::ostream& os) {
  os << "t_start,t_end,trans_m_per_s,rot_deg_per_s\n";
  for (const auto& r : result.residuals) {
    os << shortest(r.t_start) << ',' << shortest(r.t_end) << ',' << shortest(r.translation) << ','
       << shortest(r.rotation) << '\n';
  }
}

}  // namespace cvo

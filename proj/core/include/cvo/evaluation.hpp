#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "cvo/dataset.hpp"
#include "cvo/lie.hpp"

namespace cvo {

/// World-frame camera poses; the first pose is the identity for odometry output.
struct Trajectory {
  std::vector<StampedPose> poses;

  std::size_t size() const { return poses.size(); }
};

struct RpeResidual {
  double t_start = 0.0;
  double t_end = 0.0;
  double translation = 0.0;  // [m/s]
  double rotation = 0.0;     // [deg/s]
};

struct RpeResult {
  double trans_rmse = 0.0;  // [m/s]
  double rot_rmse = 0.0;    // [deg/s]
  std::vector<RpeResidual> residuals;
};

/// P_0 = I, P_k = P_{k-1} ∘ relative[k-1]. Needs one more timestamp than
/// relative poses.
Trajectory accumulate(const std::vector<Pose>& relative, const std::vector<double>& timestamps);

/// Relative pose error over fixed intervals of `delta` seconds, using every
/// estimate stamp as a start. Stamps are matched within `max_dt`. For each
/// interval E = (Q_i^-1 Q_j)^-1 (P_i^-1 P_j); the translational residual is
/// |trans(E)| / delta and the rotational one angle(rot(E)) / delta in degrees.
/// Throws NoOverlap when fewer than two intervals can be formed.
RpeResult rpe(const Trajectory& estimated, const Trajectory& reference, double delta = 1.0,
              double max_dt = 0.02);

/// "timestamp tx ty tz qx qy qz qw" per line, quaternion with qw >= 0.
std::string format_trajectory_line(const StampedPose& p);
void write_trajectory(const Trajectory& trajectory, std::ostream& os);
void write_trajectory(const Trajectory& trajectory, const std::filesystem::path& path);
Trajectory read_trajectory(const std::filesystem::path& path);

/// CSV with header t_start,t_end,trans_m_per_s,rot_deg_per_s.
void write_rpe_csv(const RpeResult& result, std::ostream& os);

}  // namespace cvo

#pragma once

#include <cstddef>
#include <vector>

#include <opencv2/core.hpp>

#include "cvo/kernels.hpp"
#include "cvo/lie.hpp"
#include "cvo/rkhs.hpp"

namespace cvo {

/// Pinhole intrinsics in pixels.
struct Intrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;

  bool valid() const { return fx > 0.0 && fy > 0.0 && cx > 0.0 && cy > 0.0; }
};

struct Frame {
  cv::Mat rgb;    // CV_8UC3, channel order R, G, B
  cv::Mat depth;  // CV_32FC1, meters; 0 marks a missing measurement
  double timestamp = 0.0;
  Intrinsics intrinsics;

  /// Throws InvalidConfig on type/size mismatch or invalid intrinsics.
  void validate() const;
};

struct SelectionConfig {
  int target_points = 3000;
  double fallback_fraction = 1.0 / 3.0;
  int gradient_block = 32;       // side of the cells used for adaptive thresholds [px]
  double gradient_margin = 7.0;  // added to the cell median gradient (intensity units)
  double canny_low = 50.0;
  double canny_high = 150.0;
  double depth_min = 0.1;  // [m]
  double depth_max = 10.0;
  std::size_t min_points = 50;

  void validate() const;
};

struct Selection {
  std::vector<cv::Point> pixels;  // (x = u, y = v), gradient picks first
  std::size_t from_gradient = 0;
  std::size_t from_edges = 0;
  bool fallback_engaged = false;
};

/// Semi-dense selection: per-cell gradient thresholding (cell median plus a
/// margin, strongest pixels first), topped up from downsampled Canny edges when
/// the gradient stage yields less than fallback_fraction of the target.
/// Pixels without valid depth never appear. Throws InsufficientPoints when
/// fewer than min_points remain.
Selection select_points(const Frame& frame, const SelectionConfig& config);

/// Pinhole back-projection with HSV + normalized intensity-gradient labels.
/// Gradient channels are divided by the largest gradient component over the
/// given pixels.
ColoredCloud back_project(const Frame& frame, const std::vector<cv::Point>& pixels);

/// select_points followed by back_project.
ColoredCloud make_cloud(const Frame& frame, const SelectionConfig& config);

/// H, S, V in [0, 1] for 8-bit RGB input; hue is measured in turns.
Vec3 rgb_to_hsv(unsigned char r, unsigned char g, unsigned char b);

Eigen::Vector2d project(const Intrinsics& K, const Vec3& p);

}  // namespace cvo

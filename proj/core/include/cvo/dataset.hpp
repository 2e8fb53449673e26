#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cvo/frame_pipeline.hpp"
#include "cvo/lie.hpp"

namespace cvo {

struct ImageEntry {
  double timestamp = 0.0;
  std::string path;  // relative to the sequence root, as listed
};

struct StampedPose {
  double timestamp = 0.0;
  Pose pose;
};

/// Camera constants that the on-disk sequence does not carry.
struct CameraConfig {
  Intrinsics intrinsics;
  double depth_scale = 5000.0;  // raw depth units per meter
};

struct SequenceIndex {
  std::filesystem::path root;
  CameraConfig camera;
  std::vector<ImageEntry> rgb;
  std::vector<ImageEntry> depth;
  std::vector<StampedPose> groundtruth;  // empty when groundtruth.txt is absent
  double association_tolerance = 0.02;   // [s]
};

struct FramePair {
  ImageEntry rgb;
  ImageEntry depth;
};

struct Association {
  std::vector<FramePair> pairs;  // ordered by rgb timestamp
  std::size_t unmatched_rgb = 0;
};

/// Parses a "timestamp path" list. Blank lines and '#' comments are skipped;
/// timestamps must be strictly increasing. Throws MissingFile / ParseError.
std::vector<ImageEntry> parse_image_list(const std::filesystem::path& file);

/// Parses "timestamp tx ty tz qx qy qz qw" rows under the same rules.
std::vector<StampedPose> parse_pose_list(const std::filesystem::path& file);

/// Reads a plain "key = value" camera file with keys fx, fy, cx, cy and
/// optional depth_scale. '#' starts a comment.
CameraConfig load_camera_config(const std::filesystem::path& file);

/// Loads rgb.txt and depth.txt (required) and groundtruth.txt (optional).
SequenceIndex load_sequence(const std::filesystem::path& root, const CameraConfig& camera);

/// Greedy association by smallest timestamp difference (strictly below the
/// tolerance), each depth image used at most once.
Association associate(const SequenceIndex& index);

/// Decodes the pair's PNG images into a Frame stamped with the rgb timestamp.
Frame load_frame(const SequenceIndex& index, const FramePair& pair);

}  // namespace cvo

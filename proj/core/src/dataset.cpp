#include "cvo/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include <Eigen/Geometry>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "cvo/errors.hpp"

namespace cvo {

namespace {

std::ifstream open_or_throw(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw MissingFile("cannot open " + file.string());
  return in;
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

bool is_skippable(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

double to_double(const std::string& tok, const std::filesystem::path& file, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    throw ParseError(file.string(), line_no, "not a number: '" + tok + "'");
  }
  if (used != tok.size() || !std::isfinite(v)) {
    throw ParseError(file.string(), line_no, "not a finite number: '" + tok + "'");
  }
  return v;
}

// Visits data lines, enforcing strictly increasing timestamps in column 0.
template <typename Fn>
void for_each_row(const std::filesystem::path& file, std::size_t columns, Fn&& fn) {
  std::ifstream in = open_or_throw(file);
  std::string line;
  std::size_t line_no = 0;
  double last = -std::numeric_limits<double>::infinity();
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    const auto toks = tokens_of(line);
    if (toks.size() != columns) {
      throw ParseError(file.string(), line_no,
                       "expected " + std::to_string(columns) + " fields, found " + std::to_string(toks.size()));
    }
    const double stamp = to_double(toks[0], file, line_no);
    if (!(stamp > last)) throw ParseError(file.string(), line_no, "timestamps must be strictly increasing");
    last = stamp;
    fn(stamp, toks, line_no);
  }
}

}  // namespace

std::vector<ImageEntry> parse_image_list(const std::filesystem::path& file) {
  std::vector<ImageEntry> out;
  for_each_row(file, 2, [&](double stamp, const std::vector<std::string>& toks, std::size_t) {
    out.push_back({stamp, toks[1]});
  });
  return out;
}

std::vector<StampedPose> parse_pose_list(const std::filesystem::path& file) {
  std::vector<StampedPose> out;
  for_each_row(file, 8, [&](double stamp, const std::vector<std::string>& toks, std::size_t line_no) {
    double v[7];
    for (int n = 0; n < 7; ++n) v[n] = to_double(toks[n + 1], file, line_no);
    Eigen::Quaterniond q(v[6], v[3], v[4], v[5]);
    if (q.norm() < 1e-9) throw ParseError(file.string(), line_no, "zero quaternion");
    q.normalize();
    out.push_back({stamp, Pose(q.toRotationMatrix(), Vec3(v[0], v[1], v[2]))});
  });
  return out;
}

CameraConfig load_camera_config(const std::filesystem::path& file) {
  std::ifstream in = open_or_throw(file);
  std::map<std::string, double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (is_skippable(line)) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(file.string(), line_no, "expected key = value");
    const auto key_toks = tokens_of(line.substr(0, eq));
    const auto val_toks = tokens_of(line.substr(eq + 1));
    if (key_toks.size() != 1 || val_toks.size() != 1) {
      throw ParseError(file.string(), line_no, "expected key = value");
    }
    const std::string& key = key_toks[0];
    if (key != "fx" && key != "fy" && key != "cx" && key != "cy" && key != "depth_scale") {
      throw ParseError(file.string(), line_no, "unknown key '" + key + "'");
    }
    values[key] = to_double(val_toks[0], file, line_no);
  }

  CameraConfig cfg;
  for (const char* key : {"fx", "fy", "cx", "cy"}) {
    if (!values.contains(key)) throw InvalidConfig(file.string() + ": missing key '" + key + "'");
  }
  cfg.intrinsics = {values["fx"], values["fy"], values["cx"], values["cy"]};
  if (values.contains("depth_scale")) cfg.depth_scale = values["depth_scale"];
  if (!cfg.intrinsics.valid() || !(cfg.depth_scale > 0.0)) {
    throw InvalidConfig(file.string() + ": intrinsics and depth_scale must be positive");
  }
  return cfg;
}

SequenceIndex load_sequence(const std::filesystem::path& root, const CameraConfig& camera) {
  SequenceIndex index;
  index.root = root;
  index.camera = camera;
  index.rgb = parse_image_list(root / "rgb.txt");
  index.depth = parse_image_list(root / "depth.txt");
  if (std::filesystem::exists(root / "groundtruth.txt")) {
    index.groundtruth = parse_pose_list(root / "groundtruth.txt");
  }
  return index;
}

Association associate(const SequenceIndex& index) {
  const double tol = index.association_tolerance;
  std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
  for (std::size_t a = 0; a < index.rgb.size(); ++a) {
    const double t = index.rgb[a].timestamp;
    auto it = std::lower_bound(index.depth.begin(), index.depth.end(), t - tol,
                               [](const ImageEntry& e, double v) { return e.timestamp < v; });
    for (; it != index.depth.end() && it->timestamp < t + tol; ++it) {
      const double diff = std::abs(t - it->timestamp);
      if (diff < tol) candidates.emplace_back(diff, a, static_cast<std::size_t>(it - index.depth.begin()));
    }
  }
  std::sort(candidates.begin(), candidates.end());

  std::vector<bool> rgb_used(index.rgb.size(), false);
  std::vector<bool> depth_used(index.depth.size(), false);
  std::vector<std::pair<std::size_t, std::size_t>> matches;
  for (const auto& [diff, a, b] : candidates) {
    if (rgb_used[a] || depth_used[b]) continue;
    rgb_used[a] = true;
    depth_used[b] = true;
    matches.emplace_back(a, b);
  }
  std::sort(matches.begin(), matches.end());

  Association out;
  out.pairs.reserve(matches.size());
  for (const auto& [a, b] : matches) out.pairs.push_back({index.rgb[a], index.depth[b]});
  out.unmatched_rgb = index.rgb.size() - matches.size();
  return out;
}

Frame load_frame(const SequenceIndex& index, const FramePair& pair) {
  const auto rgb_path = index.root / pair.rgb.path;
  const auto depth_path = index.root / pair.depth.path;

  cv::Mat bgr = cv::imread(rgb_path.string(), cv::IMREAD_COLOR);
  if (bgr.empty()) throw MissingFile("cannot decode " + rgb_path.string());
  cv::Mat raw = cv::imread(depth_path.string(), cv::IMREAD_ANYDEPTH);
  if (raw.empty()) throw MissingFile("cannot decode " + depth_path.string());

  Frame f;
  cv::cvtColor(bgr, f.rgb, cv::COLOR_BGR2RGB);
  raw.convertTo(f.depth, CV_32FC1, 1.0 / index.camera.depth_scale);
  f.timestamp = pair.rgb.timestamp;
  f.intrinsics = index.camera.intrinsics;
  f.validate();
  return f;
}

}  // namespace cvo

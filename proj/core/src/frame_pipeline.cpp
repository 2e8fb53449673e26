#include "cvo/frame_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <opencv2/imgproc.hpp>

#include "cvo/errors.hpp"

namespace cvo {

namespace {

struct GradientImage {
  cv::Mat gray;  // CV_64FC1, 0..255
  cv::Mat gu;    // CV_64FC1, central difference along u
  cv::Mat gv;
};

double intensity(const cv::Vec3b& px) { return 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2]; }

GradientImage gradients(const cv::Mat& rgb) {
  GradientImage g;
  g.gray.create(rgb.rows, rgb.cols, CV_64FC1);
  for (int v = 0; v < rgb.rows; ++v) {
    for (int u = 0; u < rgb.cols; ++u) g.gray.at<double>(v, u) = intensity(rgb.at<cv::Vec3b>(v, u));
  }
  g.gu = cv::Mat::zeros(rgb.rows, rgb.cols, CV_64FC1);
  g.gv = cv::Mat::zeros(rgb.rows, rgb.cols, CV_64FC1);
  for (int v = 1; v + 1 < rgb.rows; ++v) {
    for (int u = 1; u + 1 < rgb.cols; ++u) {
      g.gu.at<double>(v, u) = 0.5 * (g.gray.at<double>(v, u + 1) - g.gray.at<double>(v, u - 1));
      g.gv.at<double>(v, u) = 0.5 * (g.gray.at<double>(v + 1, u) - g.gray.at<double>(v - 1, u));
    }
  }
  return g;
}

bool depth_ok(const Frame& f, int u, int v, const SelectionConfig& c) {
  const float d = f.depth.at<float>(v, u);
  return std::isfinite(d) && d >= c.depth_min && d <= c.depth_max;
}

double gradient_at(const GradientImage& g, int u, int v) {
  const double a = g.gu.at<double>(v, u);
  const double b = g.gv.at<double>(v, u);
  return std::sqrt(a * a + b * b);
}

}  // namespace

void Frame::validate() const {
  if (rgb.empty() || rgb.type() != CV_8UC3) throw InvalidConfig("frame: rgb must be a non-empty 8-bit 3-channel image");
  if (depth.type() != CV_32FC1) throw InvalidConfig("frame: depth must be CV_32FC1 meters");
  if (rgb.size() != depth.size()) throw InvalidConfig("frame: rgb and depth sizes differ");
  if (!intrinsics.valid()) throw InvalidConfig("frame: intrinsics must be positive");
}

void SelectionConfig::validate() const {
  if (target_points <= 0) throw InvalidConfig("selection: target_points must be positive");
  if (!(fallback_fraction > 0.0 && fallback_fraction < 1.0)) {
    throw InvalidConfig("selection: fallback_fraction must lie in (0, 1)");
  }
  if (gradient_block <= 0) throw InvalidConfig("selection: gradient_block must be positive");
  if (!(depth_min < depth_max)) throw InvalidConfig("selection: depth_min must be < depth_max");
}

Selection select_points(const Frame& frame, const SelectionConfig& config) {
  frame.validate();
  config.validate();

  const int rows = frame.rgb.rows;
  const int cols = frame.rgb.cols;
  const GradientImage grad = gradients(frame.rgb);

  const int block = config.gradient_block;
  const int cells_u = (cols + block - 1) / block;
  const int cells_v = (rows + block - 1) / block;
  const int cells = cells_u * cells_v;
  const int quota = (config.target_points + cells - 1) / cells;

  struct Candidate {
    double magnitude;
    int u, v;
  };
  std::vector<Candidate> picked;
  cv::Mat taken = cv::Mat::zeros(rows, cols, CV_8UC1);

  std::vector<Candidate> cell;
  std::vector<double> mags;
  for (int cv_ = 0; cv_ < cells_v; ++cv_) {
    for (int cu = 0; cu < cells_u; ++cu) {
      cell.clear();
      mags.clear();
      const int v_end = std::min(rows - 1, (cv_ + 1) * block);
      const int u_end = std::min(cols - 1, (cu + 1) * block);
      for (int v = std::max(1, cv_ * block); v < v_end; ++v) {
        for (int u = std::max(1, cu * block); u < u_end; ++u) {
          if (!depth_ok(frame, u, v, config)) continue;
          const double m = gradient_at(grad, u, v);
          cell.push_back({m, u, v});
          mags.push_back(m);
        }
      }
      if (cell.empty()) continue;

      auto mid = mags.begin() + static_cast<std::ptrdiff_t>(mags.size() / 2);
      std::nth_element(mags.begin(), mid, mags.end());
      const double threshold = *mid + config.gradient_margin;

      std::erase_if(cell, [&](const Candidate& c) { return c.magnitude <= threshold; });
      std::stable_sort(cell.begin(), cell.end(),
                       [](const Candidate& a, const Candidate& b) { return a.magnitude > b.magnitude; });

      // Greedy pick with a one-pixel exclusion ring.
      int count = 0;
      for (const auto& c : cell) {
        if (count >= quota) break;
        bool crowded = false;
        for (int dv = -1; dv <= 1 && !crowded; ++dv) {
          for (int du = -1; du <= 1 && !crowded; ++du) {
            const int uu = c.u + du;
            const int vv = c.v + dv;
            if (uu >= 0 && vv >= 0 && uu < cols && vv < rows && taken.at<unsigned char>(vv, uu)) crowded = true;
          }
        }
        if (crowded) continue;
        taken.at<unsigned char>(c.v, c.u) = 1;
        picked.push_back(c);
        ++count;
      }
    }
  }

  const auto target = static_cast<std::size_t>(config.target_points);
  if (picked.size() > target) {
    std::stable_sort(picked.begin(), picked.end(),
                     [](const Candidate& a, const Candidate& b) { return a.magnitude > b.magnitude; });
    for (std::size_t n = target; n < picked.size(); ++n) taken.at<unsigned char>(picked[n].v, picked[n].u) = 0;
    picked.resize(target);
    std::stable_sort(picked.begin(), picked.end(), [](const Candidate& a, const Candidate& b) {
      return a.v != b.v ? a.v < b.v : a.u < b.u;
    });
  }

  Selection out;
  out.pixels.reserve(target);
  for (const auto& c : picked) out.pixels.emplace_back(c.u, c.v);
  out.from_gradient = out.pixels.size();

  if (static_cast<double>(out.from_gradient) < config.fallback_fraction * config.target_points) {
    out.fallback_engaged = true;
    cv::Mat gray8;
    grad.gray.convertTo(gray8, CV_8UC1);
    cv::Mat edges;
    cv::Canny(gray8, edges, config.canny_low, config.canny_high);

    std::vector<cv::Point> edge_pixels;
    for (int v = 0; v < rows; ++v) {
      for (int u = 0; u < cols; ++u) {
        if (edges.at<unsigned char>(v, u) && !taken.at<unsigned char>(v, u) && depth_ok(frame, u, v, config)) {
          edge_pixels.emplace_back(u, v);
        }
      }
    }
    const std::size_t deficit = target - out.from_gradient;
    if (!edge_pixels.empty() && deficit > 0) {
      const std::size_t stride = std::max<std::size_t>(1, (edge_pixels.size() + deficit - 1) / deficit);
      for (std::size_t n = 0; n < edge_pixels.size() && out.from_edges < deficit; n += stride) {
        out.pixels.push_back(edge_pixels[n]);
        ++out.from_edges;
      }
    }
  }

  if (out.pixels.size() < config.min_points) {
    throw InsufficientPoints("frame at t=" + std::to_string(frame.timestamp) + " yields only " +
                                 std::to_string(out.pixels.size()) + " usable points",
                             out.pixels.size(), out.fallback_engaged);
  }
  return out;
}

Vec3 rgb_to_hsv(unsigned char r8, unsigned char g8, unsigned char b8) {
  const double r = r8 / 255.0;
  const double g = g8 / 255.0;
  const double b = b8 / 255.0;
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;

  double h = 0.0;
  if (delta > 0.0) {
    if (mx == r) {
      h = (g - b) / delta;
      if (h < 0.0) h += 6.0;
    } else if (mx == g) {
      h = (b - r) / delta + 2.0;
    } else {
      h = (r - g) / delta + 4.0;
    }
    h /= 6.0;
  }
  const double s = mx > 0.0 ? delta / mx : 0.0;
  return {h, s, mx};
}

ColoredCloud back_project(const Frame& frame, const std::vector<cv::Point>& pixels) {
  frame.validate();
  const Intrinsics& K = frame.intrinsics;
  const GradientImage grad = gradients(frame.rgb);

  double scale = 0.0;
  for (const auto& px : pixels) {
    scale = std::max({scale, std::abs(grad.gu.at<double>(px.y, px.x)), std::abs(grad.gv.at<double>(px.y, px.x))});
  }

  ColoredCloud cloud;
  cloud.points.reserve(pixels.size());
  cloud.labels.reserve(pixels.size());
  for (const auto& px : pixels) {
    const double d = frame.depth.at<float>(px.y, px.x);
    cloud.points.emplace_back(d * (px.x - K.cx) / K.fx, d * (px.y - K.cy) / K.fy, d);

    const cv::Vec3b c = frame.rgb.at<cv::Vec3b>(px.y, px.x);
    const Vec3 hsv = rgb_to_hsv(c[0], c[1], c[2]);
    ColorLabel label;
    label << hsv,
        scale > 0.0 ? std::abs(grad.gu.at<double>(px.y, px.x)) / scale : 0.0,
        scale > 0.0 ? std::abs(grad.gv.at<double>(px.y, px.x)) / scale : 0.0;
    cloud.labels.push_back(label);
  }
  return cloud;
}

ColoredCloud make_cloud(const Frame& frame, const SelectionConfig& config) {
  return back_project(frame, select_points(frame, config).pixels);
}

Eigen::Vector2d project(const Intrinsics& K, const Vec3& p) {
  return {K.fx * p.x() / p.z() + K.cx, K.fy * p.y() / p.z() + K.cy};
}

}  // namespace cvo

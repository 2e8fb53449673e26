#include "cvo/voxel_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cvo {

VoxelGrid::VoxelGrid(std::span<const Vec3> points, double cell_size)
    : points_(points), cell_size_(cell_size) {
  std::vector<Key> keys(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) keys[i] = key_of(points[i]);

  order_.resize(points.size());
  std::iota(order_.begin(), order_.end(), 0u);
  std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
    const Key& ka = keys[a];
    const Key& kb = keys[b];
    if (ka.x != kb.x) return ka.x < kb.x;
    if (ka.y != kb.y) return ka.y < kb.y;
    if (ka.z != kb.z) return ka.z < kb.z;
    return a < b;
  });

  cells_.reserve(points.size());
  std::uint32_t start = 0;
  for (std::uint32_t s = 1; s <= order_.size(); ++s) {
    if (s == order_.size() || !(keys[order_[s]] == keys[order_[start]])) {
      cells_.emplace(keys[order_[start]], Range{start, s});
      start = s;
    }
  }
}

VoxelGrid::Key VoxelGrid::key_of(const Vec3& p) const {
  return {static_cast<std::int64_t>(std::floor(p.x() / cell_size_)),
          static_cast<std::int64_t>(std::floor(p.y() / cell_size_)),
          static_cast<std::int64_t>(std::floor(p.z() / cell_size_))};
}

}  // namespace cvo

#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "cvo/lie.hpp"

namespace cvo {

/// Uniform voxel hash over a fixed point set. With the cell size equal to the
/// query radius, every neighbor of a query lies in the 27 surrounding cells.
class VoxelGrid {
 public:
  VoxelGrid(std::span<const Vec3> points, double cell_size);

  double cell_size() const { return cell_size_; }
  std::size_t size() const { return points_.size(); }

  /// Calls fn(index, squared_distance) for every stored point with
  /// squared distance <= radius_sq. Visiting order is deterministic for a
  /// given grid and query; it is not sorted by index.
  template <typename Fn>
  void for_each_within(const Vec3& q, double radius_sq, Fn&& fn) const {
    const Key c = key_of(q);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for (std::int64_t dz = -1; dz <= 1; ++dz) {
          const auto it = cells_.find(Key{c.x + dx, c.y + dy, c.z + dz});
          if (it == cells_.end()) continue;
          for (std::uint32_t s = it->second.begin; s < it->second.end; ++s) {
            const std::uint32_t idx = order_[s];
            const double d2 = (points_[idx] - q).squaredNorm();
            if (d2 <= radius_sq) fn(idx, d2);
          }
        }
      }
    }
  }

 private:
  struct Key {
    std::int64_t x, y, z;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = static_cast<std::uint64_t>(k.x) * 73856093ULL;
      h ^= static_cast<std::uint64_t>(k.y) * 19349663ULL;
      h ^= static_cast<std::uint64_t>(k.z) * 83492791ULL;
      return static_cast<std::size_t>(h);
    }
  };
  struct Range {
    std::uint32_t begin, end;
  };

  Key key_of(const Vec3& p) const;

  std::span<const Vec3> points_;
  double cell_size_;
  std::vector<std::uint32_t> order_;  // point indices grouped by cell
  std::unordered_map<Key, Range, KeyHash> cells_;
};

}  // namespace cvo

#ifndef ADINSP_ENV_COLLISION_HPP_
#define ADINSP_ENV_COLLISION_HPP_

#include <algorithm>
#include <cmath>

#include "adinsp/env/voxel_map.hpp"

namespace adinsp {

inline constexpr double kDefaultInflation = 0.5;

/// True iff no occupied voxel lies within `inflation` of p (distance measured to the voxel box).
inline bool is_collision_free(const VoxelMap& map, const Vec3& p, double inflation) {
    if (inflation < 0.0) throw GeometryError("inflation must be non-negative");
    if (map.empty()) return true;
    const AxisBox b = map.bounds();
    if (b.distance(p) > inflation) return true;
    const VoxelKey lo = map.key_of(p - Vec3::Constant(inflation));
    const VoxelKey hi = map.key_of(p + Vec3::Constant(inflation));
    for (int z = lo.z; z <= hi.z; ++z)
        for (int y = lo.y; y <= hi.y; ++y)
            for (int x = lo.x; x <= hi.x; ++x) {
                const VoxelKey k{x, y, z};
                if (map.occupied(k) && map.voxel_box(k).distance(p) <= inflation) return false;
            }
    return true;
}

/// Segment query: every sample at voxel_size/2 spacing (endpoints included) must be free.
inline bool is_collision_free(const VoxelMap& map, const Vec3& a, const Vec3& b, double inflation) {
    const double len = (b - a).norm();
    const double spacing = 0.5 * map.voxel_size();
    const int n = std::max(1, static_cast<int>(std::ceil(len / spacing)));
    for (int i = 0; i <= n; ++i) {
        const Vec3 p = a + (b - a) * (static_cast<double>(i) / n);
        if (!is_collision_free(map, p, inflation)) return false;
    }
    return true;
}

}  // namespace adinsp

#endif  // ADINSP_ENV_COLLISION_HPP_

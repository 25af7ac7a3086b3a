#ifndef ADINSP_ENV_SCENE_HPP_
#define ADINSP_ENV_SCENE_HPP_

#include <set>
#include <vector>

#include "adinsp/env/voxel_map.hpp"

namespace adinsp {

/// Unexpected scene change: removed material and added obstructions.
struct MorphologyDelta {
    std::vector<AxisBox> removal_boxes;
    std::vector<AxisBox> addition_boxes;
    std::vector<Vec3> removal_points;
    std::vector<Vec3> addition_points;

    bool empty() const {
        return removal_boxes.empty() && addition_boxes.empty() && removal_points.empty() && addition_points.empty();
    }
};

/// Removals first, then additions. Boxes act on voxels whose centers they contain.
inline VoxelMap apply_delta(const VoxelMap& base, const MorphologyDelta& delta) {
    if (delta.empty()) return base;
    std::set<VoxelKey> keys(base.keys().begin(), base.keys().end());
    for (const auto& box : delta.removal_boxes)
        for (const auto& k : keys_in_box(base, box)) keys.erase(k);
    for (const auto& p : delta.removal_points) keys.erase(base.key_of(p));
    for (const auto& box : delta.addition_boxes)
        for (const auto& k : keys_in_box(base, box)) keys.insert(k);
    for (const auto& p : delta.addition_points) keys.insert(base.key_of(p));
    return VoxelMap::from_keys(std::vector<VoxelKey>(keys.begin(), keys.end()), base.voxel_size(), base.origin());
}

/// Historical map, the change applied to it, and the resulting current map.
struct Scene {
    VoxelMap historical;
    MorphologyDelta delta;
    VoxelMap current;

    static Scene make(VoxelMap historical, MorphologyDelta delta) {
        VoxelMap current = apply_delta(historical, delta);
        return Scene{std::move(historical), std::move(delta), std::move(current)};
    }
    /// Current map given directly (pre-built), no delta bookkeeping.
    static Scene with_current(VoxelMap historical, VoxelMap current) {
        return Scene{std::move(historical), {}, std::move(current)};
    }

    std::vector<Vec3> historical_surface() const { return surface_points(historical); }
    std::vector<Vec3> current_surface() const { return surface_points(current); }
};

}  // namespace adinsp

#endif  // ADINSP_ENV_SCENE_HPP_

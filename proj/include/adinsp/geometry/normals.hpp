#ifndef ADINSP_GEOMETRY_NORMALS_HPP_
#define ADINSP_GEOMETRY_NORMALS_HPP_

#include <cmath>
#include <optional>
#include <vector>

#include "adinsp/geometry/camera.hpp"

namespace adinsp {

struct NormalMap {
    int width{0};
    int height{0};
    std::vector<std::optional<Vec3>> normals;  // camera frame, row-major

    const std::optional<Vec3>& at(int u, int v) const { return normals[static_cast<std::size_t>(v) * width + u]; }
    std::size_t valid_count() const {
        std::size_t n = 0;
        for (const auto& x : normals) n += x.has_value() ? 1 : 0;
        return n;
    }
};

struct NormalEstimationOptions {
    // A neighbor whose depth differs by more than this fraction of the center depth is a discontinuity.
    double max_relative_jump{0.1};
};

/// Per-pixel normals from the cross product of central-difference tangents of back-projected points.
/// Normals face the camera. Border pixels and pixels with an invalid or discontinuous 4-neighbour are
/// left empty.
inline NormalMap estimate_normal_map(const DepthImage& depth, const CameraIntrinsics& intr,
                                     const NormalEstimationOptions& opts = {}) {
    if (depth.width < 3 || depth.height < 3) throw GeometryError("estimate_normal_map: image smaller than 3x3");
    NormalMap out{depth.width, depth.height, {}};
    out.normals.resize(static_cast<std::size_t>(depth.width) * depth.height);

    auto point = [&](int u, int v) -> Vec3 { return depth.at(u, v) * intr.pixel_ray(u, v); };

    for (int v = 1; v + 1 < depth.height; ++v) {
        for (int u = 1; u + 1 < depth.width; ++u) {
            if (!depth.valid(u, v) || !depth.valid(u - 1, v) || !depth.valid(u + 1, v) || !depth.valid(u, v - 1) ||
                !depth.valid(u, v + 1))
                continue;
            const double d = depth.at(u, v);
            const double jump = opts.max_relative_jump * d;
            if (std::abs(depth.at(u - 1, v) - d) > jump || std::abs(depth.at(u + 1, v) - d) > jump ||
                std::abs(depth.at(u, v - 1) - d) > jump || std::abs(depth.at(u, v + 1) - d) > jump)
                continue;
            const Vec3 du = point(u + 1, v) - point(u - 1, v);
            const Vec3 dv = point(u, v + 1) - point(u, v - 1);
            Vec3 n = du.cross(dv);
            const double len = n.norm();
            if (!(len > 0.0)) continue;
            n /= len;
            if (n.dot(point(u, v)) > 0.0) n = -n;
            out.normals[static_cast<std::size_t>(v) * depth.width + u] = n;
        }
    }
    return out;
}

}  // namespace adinsp

#endif  // ADINSP_GEOMETRY_NORMALS_HPP_

#ifndef ADINSP_ENV_SENSORS_HPP_
#define ADINSP_ENV_SENSORS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <vector>

#include "adinsp/env/voxel_map.hpp"
#include "adinsp/geometry/camera.hpp"

namespace adinsp {

struct RayHit {
    double range{0.0};  // distance along the unit direction
    Vec3 point;         // entry point on the hit voxel's boundary
    VoxelKey key;
};

/// First occupied voxel along a unit-direction ray (3D DDA / Amanatides-Woo traversal).
inline std::optional<RayHit> cast_ray(const VoxelMap& map, const Vec3& origin, const Vec3& dir, double max_range) {
    if (map.empty() || !(max_range > 0.0)) return std::nullopt;
    const AxisBox bounds = map.bounds();

    // Clip against the occupied bounds.
    double t_enter = 0.0, t_exit = max_range;
    for (int a = 0; a < 3; ++a) {
        if (std::abs(dir[a]) < 1e-15) {
            if (origin[a] < bounds.min[a] || origin[a] > bounds.max[a]) return std::nullopt;
            continue;
        }
        double t0 = (bounds.min[a] - origin[a]) / dir[a];
        double t1 = (bounds.max[a] - origin[a]) / dir[a];
        if (t0 > t1) std::swap(t0, t1);
        t_enter = std::max(t_enter, t0);
        t_exit = std::min(t_exit, t1);
        if (t_enter > t_exit) return std::nullopt;
    }

    const double vs = map.voxel_size();
    const Vec3 start = origin + t_enter * dir;
    VoxelKey key = map.key_of(start);
    for (int a = 0; a < 3; ++a) key[a] = std::clamp(key[a], map.key_min()[a], map.key_max()[a]);

    int step[3];
    double t_max[3], t_delta[3];
    for (int a = 0; a < 3; ++a) {
        if (dir[a] > 0.0) {
            step[a] = 1;
            t_max[a] = (map.origin()[a] + (key[a] + 1) * vs - origin[a]) / dir[a];
            t_delta[a] = vs / dir[a];
        } else if (dir[a] < 0.0) {
            step[a] = -1;
            t_max[a] = (map.origin()[a] + key[a] * vs - origin[a]) / dir[a];
            t_delta[a] = -vs / dir[a];
        } else {
            step[a] = 0;
            t_max[a] = std::numeric_limits<double>::infinity();
            t_delta[a] = std::numeric_limits<double>::infinity();
        }
    }

    double t = t_enter;
    while (t <= t_exit) {
        if (map.occupied(key)) return RayHit{t, origin + t * dir, key};
        int a = 0;
        if (t_max[1] < t_max[a]) a = 1;
        if (t_max[2] < t_max[a]) a = 2;
        t = t_max[a];
        key[a] += step[a];
        t_max[a] += t_delta[a];
    }
    return std::nullopt;
}

struct DepthNoise {
    double sigma{0.0};  // meters, Gaussian, off by default
    std::uint64_t seed{0};
};

/// Projective depth image rendered by ray casting through the voxel grid from the pose's camera.
inline DepthImage render_depth(const VoxelMap& map, const Pose6& pose, const CameraIntrinsics& intr,
                               const DepthNoise& noise = {}) {
    DepthImage img(intr.width, intr.height);
    img.pose = pose;
    const Mat3 rot = camera_rotation(pose);
    const Vec3 origin = pose.position();
    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int v = 0; v < intr.height; ++v) {
        for (int u = 0; u < intr.width; ++u) {
            const Vec3 ray = intr.pixel_ray(u, v);
            const double norm = ray.norm();
            const auto hit = cast_ray(map, origin, rot * (ray / norm), intr.max_range * norm);
            if (!hit) continue;
            double depth = hit->range / norm;
            if (noise.sigma > 0.0) depth += noise.sigma * gauss(rng);
            if (depth > 0.0 && depth <= intr.max_range) img.at(u, v) = depth;
        }
    }
    return img;
}

/// Evenly spread unit directions on the sphere (spherical Fibonacci lattice).
inline std::vector<Vec3> fibonacci_directions(int count) {
    std::vector<Vec3> dirs;
    if (count <= 0) return dirs;
    dirs.reserve(static_cast<std::size_t>(count));
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        dirs.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
    }
    return dirs;
}

/// Omnidirectional range scan from the pose position; world-frame first-hit points within range.
inline PointCloud sample_cloud(const VoxelMap& map, const Pose6& pose, double range, int ray_count) {
    PointCloud cloud;
    cloud.frame = Frame::kWorld;
    if (map.empty()) return cloud;
    const Vec3 origin = pose.position();
    for (const auto& d : fibonacci_directions(ray_count)) {
        if (const auto hit = cast_ray(map, origin, d, range)) cloud.points.push_back(hit->point);
    }
    return cloud;
}

/// Omnidirectional range sensor settings.
struct RangeSensor {
    double range{8.0};
    int ray_count{10000};

    PointCloud scan(const VoxelMap& map, const Pose6& pose) const { return sample_cloud(map, pose, range, ray_count); }

    /// Voxels hit by one scan: the surface as observed from `pose`.
    VoxelMap observe(const VoxelMap& map, const Pose6& pose) const {
        std::vector<VoxelKey> keys;
        if (!map.empty()) {
            for (const auto& d : fibonacci_directions(ray_count))
                if (const auto hit = cast_ray(map, pose.position(), d, range)) keys.push_back(hit->key);
        }
        return VoxelMap::from_keys(std::move(keys), map.voxel_size(), map.origin());
    }
};

/// Debug export: one CSV row per image row, empty cells for invalid pixels.
inline void write_depth_csv(std::ostream& out, const DepthImage& img) {
    char buf[32];
    for (int v = 0; v < img.height; ++v) {
        for (int u = 0; u < img.width; ++u) {
            if (u > 0) out << ',';
            if (img.valid(u, v)) {
                std::snprintf(buf, sizeof(buf), "%.4f", img.at(u, v));
                out << buf;
            }
        }
        out << '\n';
    }
}

}  // namespace adinsp

#endif  // ADINSP_ENV_SENSORS_HPP_

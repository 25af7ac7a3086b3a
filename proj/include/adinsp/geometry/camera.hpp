#ifndef ADINSP_GEOMETRY_CAMERA_HPP_
#define ADINSP_GEOMETRY_CAMERA_HPP_

#include <cmath>
#include <limits>
#include <vector>

#include "adinsp/geometry/types.hpp"

namespace adinsp {

inline constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }

/// Pinhole depth camera. Camera frame: x right, y down, z along the optical axis.
struct CameraIntrinsics {
    double alpha{deg2rad(69.5)};  // horizontal FOV
    double beta{deg2rad(45.0)};   // vertical FOV
    int width{160};
    int height{100};
    double max_range{10.0};

    double fx() const { return 0.5 * width / std::tan(0.5 * alpha); }
    double fy() const { return 0.5 * height / std::tan(0.5 * beta); }
    double cx() const { return 0.5 * (width - 1); }
    double cy() const { return 0.5 * (height - 1); }

    /// Un-normalized ray (x/z, y/z, 1) through pixel (u, v).
    Vec3 pixel_ray(int u, int v) const { return {(u - cx()) / fx(), (v - cy()) / fy(), 1.0}; }

    void validate() const {
        if (!(alpha > 0.0 && alpha < std::numbers::pi) || !(beta > 0.0 && beta < std::numbers::pi))
            throw GeometryError("camera FOV must lie in (0, pi)");
        if (width < 3 || height < 3) throw GeometryError("camera image must be at least 3x3");
        if (!(max_range > 0.0)) throw GeometryError("camera max_range must be positive");
    }
};

/// Projective depth (distance along the optical axis) per pixel; NaN marks invalid pixels.
struct DepthImage {
    int width{0};
    int height{0};
    std::vector<double> depth;  // row-major
    Pose6 pose;                 // generating pose

    DepthImage() = default;
    DepthImage(int w, int h) : width(w), height(h), depth(static_cast<std::size_t>(w) * h, kInvalid) {}

    static constexpr double kInvalid = std::numeric_limits<double>::quiet_NaN();

    double at(int u, int v) const { return depth[static_cast<std::size_t>(v) * width + u]; }
    double& at(int u, int v) { return depth[static_cast<std::size_t>(v) * width + u]; }
    bool valid(int u, int v) const { return std::isfinite(at(u, v)) && at(u, v) > 0.0; }

    std::size_t valid_count() const {
        std::size_t n = 0;
        for (double d : depth) n += (std::isfinite(d) && d > 0.0) ? 1 : 0;
        return n;
    }
};

/// World-from-camera rotation for a robot pose; the optical axis is the body forward axis.
inline Mat3 camera_rotation(const Pose6& pose) {
    Mat3 body_from_cam;
    // columns: camera x (right) = -body y, camera y (down) = -body z, camera z (forward) = body x
    body_from_cam << 0, 0, 1,  //
        -1, 0, 0,              //
        0, -1, 0;
    return pose.rotation() * body_from_cam;
}

}  // namespace adinsp

#endif  // ADINSP_GEOMETRY_CAMERA_HPP_

#ifndef ADINSP_GEOMETRY_TYPES_HPP_
#define ADINSP_GEOMETRY_TYPES_HPP_

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace adinsp {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
    a = std::remainder(a, 2.0 * std::numbers::pi);  // [-pi, pi]
    if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
    return a;
}

inline bool is_finite(const Vec3& v) { return v.allFinite(); }

/// Robot odometry state: position plus roll/pitch/yaw.
struct Pose6 {
    double x{0.0}, y{0.0}, z{0.0};
    double phi{0.0}, theta{0.0}, psi{0.0};

    Vec3 position() const { return {x, y, z}; }

    static Pose6 from(const Vec3& p, double yaw, double roll = 0.0, double pitch = 0.0) {
        return Pose6{p.x(), p.y(), p.z(), wrap_angle(roll), wrap_angle(pitch), wrap_angle(yaw)};
    }

    /// World-from-body rotation (ZYX convention).
    Mat3 rotation() const {
        return (Eigen::AngleAxisd(psi, Vec3::UnitZ()) * Eigen::AngleAxisd(theta, Vec3::UnitY()) *
                Eigen::AngleAxisd(phi, Vec3::UnitX()))
            .toRotationMatrix();
    }
};

/// 4-DOF reference view pose (position + yaw).
struct ViewPose4 {
    double x{0.0}, y{0.0}, z{0.0};
    double psi{0.0};

    Vec3 position() const { return {x, y, z}; }

    static ViewPose4 from(const Vec3& p, double yaw) { return ViewPose4{p.x(), p.y(), p.z(), wrap_angle(yaw)}; }

    Pose6 to_pose6() const { return Pose6{x, y, z, 0.0, 0.0, psi}; }
};

inline ViewPose4 to_view_pose(const Pose6& p) { return ViewPose4{p.x, p.y, p.z, p.psi}; }

/// Ordered sequence of view poses (global segment, predicted local path, ...).
using PathSegment = std::vector<ViewPose4>;

enum class Frame { kWorld, kSensor };

struct PointCloud {
    std::vector<Vec3> points;
    Frame frame{Frame::kWorld};

    bool empty() const { return points.empty(); }
    std::size_t size() const { return points.size(); }
};

/// Proper rigid transform p -> R p + t.
struct RigidTransform {
    Mat3 rotation{Mat3::Identity()};
    Vec3 translation{Vec3::Zero()};

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

    /// Heading change induced by the rotation (rotation about world z).
    double yaw_angle() const { return std::atan2(rotation(1, 0), rotation(0, 0)); }

    static RigidTransform identity() { return {}; }
};

/// Raised when a geometric precondition does not hold (degenerate input, size mismatch, ...).
class GeometryError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline std::vector<Vec3> positions(const PathSegment& path) {
    std::vector<Vec3> out;
    out.reserve(path.size());
    for (const auto& p : path) out.push_back(p.position());
    return out;
}

}  // namespace adinsp

#endif  // ADINSP_GEOMETRY_TYPES_HPP_

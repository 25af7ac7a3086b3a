#ifndef ADINSP_LOCAL_VIEW_PLANNER_HPP_
#define ADINSP_LOCAL_VIEW_PLANNER_HPP_

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>

#include "adinsp/env/sensors.hpp"
#include "adinsp/geometry/nearest.hpp"
#include "adinsp/global/viewpoints.hpp"

namespace adinsp {

struct LocalPlanConfig {
    ViewConstraints constraints;
    int horizon{5};
    std::optional<HeightBand> band{HeightBand{}};
    // Guide poses laterally closer than this count as reached: the sweep holds instead of stepping.
    double lateral_deadband{0.3};

    void validate() const {
        constraints.validate();
        if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
        if (lateral_deadband < 0.0) throw std::invalid_argument("lateral_deadband must be non-negative");
    }
};

/// Surface-relative frame: x toward the nearest surface point, y = up x nu_x, z = nu_x x nu_y.
struct EgoFrame {
    Vec3 nu_x, nu_y, nu_z;
    double range{0.0};  // |p_nn - x|
};

class EgoFrameError : public GeometryError {
public:
    using GeometryError::GeometryError;
};

inline EgoFrame ego_frame(const Vec3& position, const Vec3& nearest) {
    const Vec3 d = nearest - position;
    const double range = d.norm();
    if (!(range > 0.0)) throw EgoFrameError("robot coincides with the nearest surface point");
    EgoFrame f;
    f.range = range;
    f.nu_x = d / range;
    const Vec3 y = Vec3::UnitZ().cross(f.nu_x);
    if (y.norm() < 1e-6) throw EgoFrameError("nearest surface point is straight above or below the robot");
    f.nu_y = y.normalized();
    f.nu_z = f.nu_x.cross(f.nu_y);
    return f;
}

/// Heading that looks along nu_x.
inline double facing_yaw(const Vec3& nu_x) { return std::atan2(nu_x.y(), nu_x.x()); }

struct ViewStep {
    ViewPose4 pose;
    EgoFrame frame;
    Vec3 nearest;
    double d_insp{0.0}, d_hov{0.0}, d_vov{0.0};
};

/// One application of the reactive view rule from `position` given the nearest surface point:
/// x + nu_x d_insp + nu_y (sweep d_hov) + nu_z d_vov, z clamped to the band, yaw facing nu_x.
/// d_insp = |p_nn - x| - d_view pulls the range toward the desired viewing distance.
inline ViewStep view_step(const Vec3& position, const Vec3& nearest, const LocalPlanConfig& cfg, int sweep_sign) {
    const ViewConstraints& c = cfg.constraints;
    ViewStep s;
    s.nearest = nearest;
    s.frame = ego_frame(position, nearest);
    const double r = s.frame.range;
    s.d_insp = r - c.d_view;
    s.d_hov = 2.0 * std::tan(0.5 * c.alpha) * r * (1.0 - c.gamma_h);
    s.d_vov = 2.0 * std::tan(0.5 * c.beta) * r * (1.0 - c.gamma_v);
    const double sweep = sweep_sign > 0 ? 1.0 : (sweep_sign < 0 ? -1.0 : 0.0);
    Vec3 next = position + s.frame.nu_x * s.d_insp + s.frame.nu_y * (sweep * s.d_hov) + s.frame.nu_z * s.d_vov;
    if (cfg.band) next.z() = cfg.band->clamp(next.z());
    s.pose = ViewPose4::from(next, facing_yaw(s.frame.nu_x));
    return s;
}

/// Next constraint-satisfying view pose from the odometry pose and an instantaneous cloud.
inline ViewPose4 compute_next_view_pose(const Pose6& odom, const PointCloud& cloud, const LocalPlanConfig& cfg,
                                        int sweep_sign) {
    const NearestResult nn = nearest_point(cloud, odom.position());
    return view_step(odom.position(), nn.point, cfg, sweep_sign).pose;
}

/// Lateral progression direction toward a guide pose: +1/-1 along nu_y, 0 inside the deadband.
inline int sweep_toward(const EgoFrame& frame, const Vec3& position, const Vec3& guide, double deadband) {
    const double lateral = frame.nu_y.dot(guide - position);
    if (lateral > deadband) return 1;
    if (lateral < -deadband) return -1;
    return 0;
}

struct LocalPrediction {
    PathSegment path;
    bool short_horizon{false};  // sensing failed at a virtual pose; prediction truncated
};

using SenseFn = std::function<PointCloud(const Pose6&)>;

/// Predicted local path over the horizon: the view rule is applied recursively from each predicted
/// pose, re-sensing there. Each step sweeps toward the next guide pose the prediction has not yet
/// reached (within the deadband) or passed; once every guide pose is behind it, the sweep holds. Each
/// predicted yaw faces the nearest surface seen from that pose.
inline LocalPrediction predict_local_path(const Pose6& odom, const PointCloud& cloud, const SenseFn& sense,
                                          const PathSegment& guide, const LocalPlanConfig& cfg) {
    cfg.validate();
    if (guide.empty()) throw std::invalid_argument("predict_local_path: empty guide");
    LocalPrediction out;
    Vec3 position = odom.position();
    PointCloud current = cloud;
    std::size_t next = 0;  // first guide pose not yet reached by the prediction
    for (int i = 0; i < cfg.horizon; ++i) {
        const NearestResult nn = nearest_point(current, position);
        const EgoFrame frame = ego_frame(position, nn.point);
        auto lateral = [&](std::size_t j, const Vec3& from) { return frame.nu_y.dot(guide[j].position() - from); };
        while (next < guide.size() && std::abs(lateral(next, position)) <= cfg.lateral_deadband) ++next;
        const int sweep = next < guide.size() ? (lateral(next, position) > 0.0 ? 1 : -1) : 0;
        ViewPose4 pose = view_step(position, nn.point, cfg, sweep).pose;
        while (next < guide.size()) {
            const double before = lateral(next, position);
            const double after = lateral(next, pose.position());
            if (std::abs(after) > cfg.lateral_deadband && before * after > 0.0) break;
            ++next;
        }

        current = sense(pose.to_pose6());
        if (current.empty()) {
            out.path.push_back(pose);
            out.short_horizon = i + 1 < cfg.horizon;
            break;
        }
        const NearestResult there = nearest_point(current, pose.position());
        if (there.distance > 0.0) {
            const Vec3 dir = (there.point - pose.position()) / there.distance;
            if (Vec3::UnitZ().cross(dir).norm() >= 1e-6) pose.psi = facing_yaw(dir);
        }
        out.path.push_back(pose);
        position = pose.position();
    }
    return out;
}

inline LocalPrediction predict_local_path(const Pose6& odom, const VoxelMap& map, const RangeSensor& sensor,
                                          const PathSegment& guide, const LocalPlanConfig& cfg) {
    const SenseFn sense = [&](const Pose6& p) { return sensor.scan(map, p); };
    return predict_local_path(odom, sense(odom), sense, guide, cfg);
}

}  // namespace adinsp

#endif  // ADINSP_LOCAL_VIEW_PLANNER_HPP_

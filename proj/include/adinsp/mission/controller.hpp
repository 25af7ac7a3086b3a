#ifndef ADINSP_MISSION_CONTROLLER_HPP_
#define ADINSP_MISSION_CONTROLLER_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "adinsp/env/collision.hpp"
#include "adinsp/geometry/types.hpp"

namespace adinsp {

struct RobotState {
    Pose6 pose;
    double body_height{0.6};
    double v_max{0.8};  // m/s
    double w_max{1.0};  // rad/s
    double inflation{kDefaultInflation};
    bool blocked{false};
    double speed{0.0};  // translational speed over the last step

    void validate() const {
        if (!(v_max >= 0.0) || !(w_max >= 0.0)) throw std::invalid_argument("speed limits must be non-negative");
        if (!(inflation >= 0.0)) throw std::invalid_argument("inflation must be non-negative");
    }
};

/// One saturated proportional step toward `ref`. The position moves straight at up to v_max dt, the
/// yaw turns the short way at up to w_max dt. If the swept segment is not collision-free the robot
/// holds and `blocked` is set.
inline RobotState track_step(const RobotState& state, const ViewPose4& ref, const VoxelMap& map, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("track_step: dt must be positive");
    RobotState next = state;
    next.blocked = false;
    next.speed = 0.0;

    const Vec3 from = state.pose.position();
    const Vec3 delta = ref.position() - from;
    const double dist = delta.norm();
    const double max_step = state.v_max * dt;
    const Vec3 to = dist > max_step ? Vec3(from + delta * (max_step / dist)) : ref.position();

    const double dpsi = wrap_angle(ref.psi - state.pose.psi);
    const double max_turn = state.w_max * dt;
    const double turn = std::clamp(dpsi, -max_turn, max_turn);

    if (dist > 0.0 && !is_collision_free(map, from, to, state.inflation)) {
        next.blocked = true;
        return next;
    }
    next.pose.x = to.x();
    next.pose.y = to.y();
    next.pose.z = to.z();
    next.pose.psi = std::abs(turn) == std::abs(dpsi) ? wrap_angle(ref.psi) : wrap_angle(state.pose.psi + turn);
    next.speed = (to - from).norm() / dt;
    return next;
}

/// Seeded Gaussian perturbation of the reported pose (x, y and yaw).
class OdometryNoise {
public:
    OdometryNoise(double sigma_xy, double sigma_psi, std::uint64_t seed)
        : sigma_xy_(sigma_xy), sigma_psi_(sigma_psi), rng_(seed) {
        if (!(sigma_xy >= 0.0) || !(sigma_psi >= 0.0)) throw std::invalid_argument("odometry sigmas must be >= 0");
    }

    Pose6 apply(const Pose6& truth) {
        Pose6 out = truth;
        if (sigma_xy_ > 0.0) {
            out.x += sigma_xy_ * gauss_(rng_);
            out.y += sigma_xy_ * gauss_(rng_);
        }
        if (sigma_psi_ > 0.0) out.psi = wrap_angle(out.psi + sigma_psi_ * gauss_(rng_));
        return out;
    }

private:
    double sigma_xy_, sigma_psi_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
};

inline Pose6 add_odometry_noise(const RobotState& state, double sigma_xy, double sigma_psi, std::uint64_t seed) {
    OdometryNoise noise(sigma_xy, sigma_psi, seed);
    return noise.apply(state.pose);
}

}  // namespace adinsp

#endif  // ADINSP_MISSION_CONTROLLER_HPP_

#ifndef ADINSP_MISSION_METRICS_HPP_
#define ADINSP_MISSION_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "adinsp/geometry/nearest.hpp"
#include "adinsp/geometry/normals.hpp"

namespace adinsp {

enum class Mode { kGlobal, kReplanned };

inline const char* to_string(Mode m) { return m == Mode::kGlobal ? "GLOBAL" : "REPLANNED"; }

/// Mean incidence cosine over pixels with a valid normal, measured against the optical axis:
/// 1 for head-on viewing, cos(theta) for a plane tilted by theta. Throws when no pixel qualifies.
inline double viewpoint_utility(const DepthImage& depth, const CameraIntrinsics& intr,
                                const NormalEstimationOptions& opts = {}) {
    const NormalMap normals = estimate_normal_map(depth, intr, opts);
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& nrm : normals.normals) {
        if (!nrm) continue;
        sum += std::min(1.0, std::abs(nrm->z()));
        ++n;
    }
    if (n == 0) throw GeometryError("viewpoint_utility: no valid surface pixel in view");
    return sum / static_cast<double>(n);
}

inline double path_rmse(const PathSegment& a, const PathSegment& b) {
    if (a.size() != b.size()) throw GeometryError("path_rmse: length mismatch");
    if (a.empty()) throw GeometryError("path_rmse: empty paths");
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i].position() - b[i].position()).squaredNorm();
    return std::sqrt(sq / static_cast<double>(a.size()));
}

/// Range from the robot to the nearest sensed surface point.
inline double viewing_distance(const Pose6& robot, const PointCloud& cloud) {
    if (cloud.empty()) throw GeometryError("viewing_distance: empty cloud");
    return nearest_point(cloud, robot.position()).distance;
}

/// One supervision cycle.
struct CycleRecord {
    double t{0.0};
    std::string task_id;
    Mode mode{Mode::kGlobal};
    double f_d{0.0};
    double gamma_s{1.0};
    double rmse_pre{0.0};
    double rmse_post{0.0};
    bool aligned{false};  // Kabsch reprojection applied this cycle
    std::size_t cursor{0};
    std::size_t visited{0};
    double viewing_distance{std::numeric_limits<double>::quiet_NaN()};
    double utility{std::numeric_limits<double>::quiet_NaN()};  // NaN: no surface in view
    bool blocked{false};
    bool fallback{false};  // GLOBAL forced by the stall guard
    ViewPose4 reference;
};

struct MissionLog {
    std::vector<CycleRecord> cycles;
    bool completed{false};
    double duration{0.0};  // sim seconds

    void append(const CycleRecord& r) {
        if (!cycles.empty() && !(r.t > cycles.back().t))
            throw std::logic_error("MissionLog: timestamps must strictly increase");
        cycles.push_back(r);
    }
};

struct MissionSummary {
    double duration{0.0};
    std::size_t cycles{0};
    double mean_utility{std::numeric_limits<double>::quiet_NaN()};
    double min_utility{std::numeric_limits<double>::quiet_NaN()};
    double replanned_percent{0.0};
    std::optional<double> time_to_reconverge;
    double mean_distance_error{std::numeric_limits<double>::quiet_NaN()};
    double min_distance_error{std::numeric_limits<double>::quiet_NaN()};
    bool completed{false};
};

/// Aggregates a log. Reconvergence is the first cycle whose viewing distance is within 10% of d_view.
inline MissionSummary summarize(const MissionLog& log, double d_view) {
    MissionSummary s;
    s.duration = log.duration;
    s.completed = log.completed;
    s.cycles = log.cycles.size();
    if (log.cycles.empty()) return s;
    double usum = 0.0, umin = std::numeric_limits<double>::infinity();
    std::size_t un = 0, replanned = 0;
    double esum = 0.0, emin = std::numeric_limits<double>::infinity();
    std::size_t en = 0;
    for (const auto& c : log.cycles) {
        if (c.mode == Mode::kReplanned) ++replanned;
        if (std::isfinite(c.utility)) {
            usum += c.utility;
            umin = std::min(umin, c.utility);
            ++un;
        }
        if (std::isfinite(c.viewing_distance)) {
            const double err = std::abs(c.viewing_distance - d_view);
            esum += err;
            emin = std::min(emin, err);
            ++en;
            if (!s.time_to_reconverge && err < 0.1 * d_view) s.time_to_reconverge = c.t;
        }
    }
    if (un > 0) {
        s.mean_utility = usum / static_cast<double>(un);
        s.min_utility = umin;
    }
    if (en > 0) {
        s.mean_distance_error = esum / static_cast<double>(en);
        s.min_distance_error = emin;
    }
    s.replanned_percent = 100.0 * static_cast<double>(replanned) / static_cast<double>(log.cycles.size());
    return s;
}

namespace detail {

inline std::string fmt(double v, int precision = 6) {
    if (std::isnan(v)) return "nan";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    std::string out(buf);
    if (out.rfind("-0.", 0) == 0 && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
    return out;
}

}  // namespace detail

inline void write_log_csv(std::ostream& out, const MissionLog& log) {
    out << "t,task,mode,f_d,gamma_s,deviation,rmse_pre,rmse_post,aligned,cursor,visited,viewing_distance,utility,"
           "blocked,fallback,ref_x,ref_y,ref_z,ref_psi\n";
    for (const auto& c : log.cycles) {
        out << detail::fmt(c.t, 3) << ',' << c.task_id << ',' << to_string(c.mode) << ',' << detail::fmt(c.f_d) << ','
            << detail::fmt(c.gamma_s) << ',' << detail::fmt(1.0 - c.gamma_s) << ',' << detail::fmt(c.rmse_pre) << ','
            << detail::fmt(c.rmse_post) << ',' << (c.aligned ? 1 : 0) << ',' << c.cursor << ',' << c.visited << ','
            << detail::fmt(c.viewing_distance) << ',' << detail::fmt(c.utility) << ',' << (c.blocked ? 1 : 0) << ','
            << (c.fallback ? 1 : 0) << ',' << detail::fmt(c.reference.x) << ',' << detail::fmt(c.reference.y) << ',' << detail::fmt(c.reference.z)
            << ',' << detail::fmt(c.reference.psi) << '\n';
    }
}

}  // namespace adinsp

#endif  // ADINSP_MISSION_METRICS_HPP_

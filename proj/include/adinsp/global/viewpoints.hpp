#ifndef ADINSP_GLOBAL_VIEWPOINTS_HPP_
#define ADINSP_GLOBAL_VIEWPOINTS_HPP_

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adinsp/env/collision.hpp"
#include "adinsp/geometry/camera.hpp"
#include "adinsp/geometry/polygon.hpp"

namespace adinsp {

/// Photogrammetric viewing constraints shared by the global and local planners.
struct ViewConstraints {
    double d_view{2.0};
    double gamma_h{0.6};
    double gamma_v{0.6};
    double alpha{deg2rad(69.5)};
    double beta{deg2rad(45.0)};

    void validate() const {
        if (!(d_view > 0.0)) throw std::invalid_argument("d_view must be positive");
        if (!(gamma_h >= 0.0 && gamma_h < 1.0) || !(gamma_v >= 0.0 && gamma_v < 1.0))
            throw std::invalid_argument("overlaps must lie in [0, 1)");
        if (!(alpha > 0.0 && alpha < std::numbers::pi) || !(beta > 0.0 && beta < std::numbers::pi))
            throw std::invalid_argument("FOV must lie in (0, pi)");
    }

    /// Camera footprint on a fronto-parallel surface at `range`.
    double footprint_width(double range) const { return 2.0 * range * std::tan(0.5 * alpha); }
    double footprint_height(double range) const { return 2.0 * range * std::tan(0.5 * beta); }

    /// Grid line spacing from the footprint and the required overlap.
    double spacing_h() const { return footprint_width(d_view) * (1.0 - gamma_h); }
    double spacing_v() const { return footprint_height(d_view) * (1.0 - gamma_v); }
};

/// Reachable body-height band for a ground robot.
struct HeightBand {
    double z_min{0.6};
    double z_max{0.6};

    bool contains(double z, double eps = 1e-9) const { return z >= z_min - eps && z <= z_max + eps; }
    double clamp(double z) const { return std::min(std::max(z, z_min), z_max); }
    double distance(double z) const { return z < z_min ? z_min - z : (z > z_max ? z - z_max : 0.0); }
};

/// Which side of the ROI plane viewpoints go to.
enum class ViewSide { kAuto, kNormal, kOpposite };

struct InspectionTask {
    std::string id;
    PolygonROI roi;
    ViewConstraints constraints;
    ViewSide side{ViewSide::kAuto};
    std::optional<HeightBand> band;
};

struct ViewPlan {
    std::string task_id;
    std::vector<ViewPose4> viewpoints;
    std::vector<bool> valid;
    std::vector<std::size_t> invalid_log;  // indices dropped by collision filtering
    bool sparse{false};
    double spacing_h{0.0};
    double spacing_v{0.0};
    Vec3 view_normal{Vec3::Zero()};  // unit, from surface toward viewpoints
    std::vector<Eigen::Vector2d> grid_points;  // in-plane source of each viewpoint
    std::vector<std::string> warnings;

    std::size_t valid_count() const {
        std::size_t n = 0;
        for (bool v : valid) n += v ? 1 : 0;
        return n;
    }
    std::vector<std::size_t> valid_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < valid.size(); ++i)
            if (valid[i]) out.push_back(i);
        return out;
    }
};

class TaskUnreachable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Grid view plan over a polygonal ROI.
///
/// The plane is gridded from the in-plane bounding-box minimum with spacing s_H = 2 d tan(a/2)(1 - g_H)
/// along the horizontal axis and s_V = 2 d tan(b/2)(1 - g_V) along the vertical one. Intersections
/// inside the polygon are pushed out by d_view along the normal on the robot's side and turned to look
/// back at the surface. With a height band, only rows inside the band survive; if none do, the row
/// nearest the band is kept and clamped into it.
inline ViewPlan generate_grid_viewpoints(const InspectionTask& task, const std::optional<Vec3>& robot = std::nullopt) {
    const ViewConstraints& c = task.constraints;
    c.validate();
    const PolygonROI& roi = task.roi;
    const PlaneFrame frame = plane_frame(roi);

    ViewPlan plan;
    plan.task_id = task.id;
    plan.spacing_h = c.spacing_h();
    plan.spacing_v = c.spacing_v();

    double side = 1.0;
    switch (task.side) {
        case ViewSide::kNormal: side = 1.0; break;
        case ViewSide::kOpposite: side = -1.0; break;
        case ViewSide::kAuto: side = (robot && roi.signed_distance(*robot) < 0.0) ? -1.0 : 1.0; break;
    }
    plan.view_normal = side * roi.normal();
    const double yaw = std::atan2(-plan.view_normal.y(), -plan.view_normal.x());

    Eigen::Vector2d lo = Eigen::Vector2d::Constant(std::numeric_limits<double>::infinity());
    Eigen::Vector2d hi = -lo;
    for (const auto& v : roi.vertices()) {
        const Eigen::Vector2d uv = frame.to_plane(v);
        lo = lo.cwiseMin(uv);
        hi = hi.cwiseMax(uv);
    }

    struct Candidate {
        int row;
        Eigen::Vector2d uv;
        Vec3 position;
    };
    std::vector<Candidate> kept;
    constexpr double eps = 1e-9;
    for (int row = 0; lo.y() + row * plan.spacing_v <= hi.y() + eps; ++row) {
        for (int col = 0; lo.x() + col * plan.spacing_h <= hi.x() + eps; ++col) {
            const Eigen::Vector2d uv{lo.x() + col * plan.spacing_h, lo.y() + row * plan.spacing_v};
            const Vec3 on_plane = roi.project(frame.to_world(uv));
            if (!point_in_polygon(roi, on_plane)) continue;
            kept.push_back({row, uv, on_plane + c.d_view * plan.view_normal});
        }
    }

    if (kept.empty()) {
        plan.sparse = true;
        kept.push_back({0, frame.to_plane(roi.centroid()), roi.centroid() + c.d_view * plan.view_normal});
        plan.warnings.push_back("ROI smaller than one grid cell; using a single centroid viewpoint");
    }

    if (task.band) {
        const HeightBand& band = *task.band;
        std::map<int, double> row_z;
        for (const auto& k : kept) row_z.emplace(k.row, k.position.z());
        bool any_inside = false;
        for (const auto& [row, z] : row_z) any_inside = any_inside || band.contains(z);
        int nearest_row = row_z.begin()->first;
        if (!any_inside) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& [row, z] : row_z) {
                if (band.distance(z) < best) {
                    best = band.distance(z);
                    nearest_row = row;
                }
            }
        }
        std::vector<Candidate> banded;
        std::map<int, bool> reported;
        for (auto k : kept) {
            const bool keep = any_inside ? band.contains(k.position.z()) : k.row == nearest_row;
            if (keep) {
                k.position.z() = band.clamp(k.position.z());
                banded.push_back(k);
            } else if (!reported[k.row]) {
                reported[k.row] = true;
                plan.warnings.push_back("row " + std::to_string(k.row) + " at z=" + std::to_string(k.position.z()) +
                                        " is outside the reachable height band; dropped");
            }
        }
        kept = std::move(banded);
    }

    for (const auto& k : kept) {
        plan.viewpoints.push_back(ViewPose4::from(k.position, yaw));
        plan.grid_points.push_back(k.uv);
    }
    plan.valid.assign(plan.viewpoints.size(), true);
    return plan;
}

/// Marks viewpoints in collision as invalid (kept for logging, excluded from touring).
/// Throws TaskUnreachable when nothing valid is left.
inline ViewPlan filter_viewpoints(ViewPlan plan, const VoxelMap& map, double inflation) {
    for (std::size_t i = 0; i < plan.viewpoints.size(); ++i) {
        if (plan.valid[i] && !is_collision_free(map, plan.viewpoints[i].position(), inflation)) {
            plan.valid[i] = false;
            plan.invalid_log.push_back(i);
        }
    }
    if (plan.valid_count() == 0) throw TaskUnreachable("task " + plan.task_id + ": every viewpoint is in collision");
    return plan;
}

}  // namespace adinsp

#endif  // ADINSP_GLOBAL_VIEWPOINTS_HPP_

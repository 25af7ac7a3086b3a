#ifndef ADINSP_GLOBAL_ROUTE_HPP_
#define ADINSP_GLOBAL_ROUTE_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "adinsp/env/collision.hpp"
#include "adinsp/global/viewpoints.hpp"

namespace adinsp {

class RouteNotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RouteOptions {
    double inflation{kDefaultInflation};
    HeightBand band{};     // traversal height band (voxel layers the ground robot moves in)
    double margin{2.0};    // search domain = map bounds + endpoints, grown by this much in x/y
};

struct Route {
    std::vector<Vec3> waypoints;
    double length{0.0};     // polyline length of the waypoints
    double grid_cost{0.0};  // center-to-center cost of the voxel path
    std::vector<VoxelKey> cells;
};

/// Box of voxel keys the planner may use: x/y span the map and endpoints plus a margin, z the band.
struct RouteDomain {
    VoxelKey lo, hi;

    bool contains(const VoxelKey& k) const {
        return k.x >= lo.x && k.y >= lo.y && k.z >= lo.z && k.x <= hi.x && k.y <= hi.y && k.z <= hi.z;
    }
    std::size_t index(const VoxelKey& k) const {
        const std::size_t nx = static_cast<std::size_t>(hi.x - lo.x + 1);
        const std::size_t ny = static_cast<std::size_t>(hi.y - lo.y + 1);
        return (static_cast<std::size_t>(k.z - lo.z) * ny + static_cast<std::size_t>(k.y - lo.y)) * nx +
               static_cast<std::size_t>(k.x - lo.x);
    }
    std::size_t volume() const {
        return static_cast<std::size_t>(hi.x - lo.x + 1) * static_cast<std::size_t>(hi.y - lo.y + 1) *
               static_cast<std::size_t>(hi.z - lo.z + 1);
    }
};

inline RouteDomain route_domain(const VoxelMap& map, const Vec3& start, const Vec3& goal, const RouteOptions& opts) {
    Vec3 lo = start.cwiseMin(goal), hi = start.cwiseMax(goal);
    if (!map.empty()) {
        lo = lo.cwiseMin(map.bounds().min);
        hi = hi.cwiseMax(map.bounds().max);
    }
    lo -= Vec3(opts.margin, opts.margin, 0.0);
    hi += Vec3(opts.margin, opts.margin, 0.0);
    VoxelKey klo = map.key_of(lo), khi = map.key_of(hi);
    klo.z = map.key_of(Vec3(0, 0, opts.band.z_min)).z;
    khi.z = map.key_of(Vec3(0, 0, opts.band.z_max)).z;
    return {klo, khi};
}

/// Snaps a point into the band and returns its voxel.
inline VoxelKey route_cell(const VoxelMap& map, const Vec3& p, const HeightBand& band) {
    return map.key_of(Vec3(p.x(), p.y(), band.clamp(p.z())));
}

/// Shortest 26-connected route over free voxels inside the traversal band (A*, Euclidean edge costs,
/// ties broken by lexicographic voxel index). Waypoints run from `start` through the interior voxel
/// centers (height clamped into the band) to `goal`.
inline Route plan_route(const VoxelMap& map, const Vec3& start, const Vec3& goal, const RouteOptions& opts = {}) {
    Route route;
    if ((goal - start).norm() == 0.0) {
        route.waypoints = {start};
        route.cells = {route_cell(map, start, opts.band)};
        return route;
    }
    const RouteDomain dom = route_domain(map, start, goal, opts);
    const VoxelKey s = route_cell(map, start, opts.band);
    const VoxelKey g = route_cell(map, goal, opts.band);

    // 0 unknown, 1 free, 2 blocked
    std::vector<std::uint8_t> free_state(dom.volume(), 0);
    auto is_free = [&](const VoxelKey& k) {
        auto& st = free_state[dom.index(k)];
        if (st == 0) st = is_collision_free(map, map.center(k), opts.inflation) ? 1 : 2;
        return st == 1;
    };
    if (!dom.contains(s) || !is_free(s)) throw RouteNotFound("route start is in collision");
    if (!dom.contains(g) || !is_free(g)) throw RouteNotFound("route goal is occupied or outside the traversal band");

    const double vs = map.voxel_size();
    auto heuristic = [&](const VoxelKey& k) {
        return vs * std::sqrt(double((k.x - g.x) * (k.x - g.x) + (k.y - g.y) * (k.y - g.y) + (k.z - g.z) * (k.z - g.z)));
    };

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> cost(dom.volume(), kInf);
    std::vector<std::int64_t> parent(dom.volume(), -1);
    std::vector<std::uint8_t> closed(dom.volume(), 0);
    using Entry = std::tuple<double, VoxelKey>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    cost[dom.index(s)] = 0.0;
    open.emplace(heuristic(s), s);

    std::vector<VoxelKey> keys_by_index(dom.volume());
    keys_by_index[dom.index(s)] = s;
    bool found = false;
    while (!open.empty()) {
        const auto [f, k] = open.top();
        open.pop();
        const std::size_t ki = dom.index(k);
        if (closed[ki]) continue;
        closed[ki] = 1;
        if (k == g) {
            found = true;
            break;
        }
        for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0 && dz == 0) continue;
                    const VoxelKey n{k.x + dx, k.y + dy, k.z + dz};
                    if (!dom.contains(n)) continue;
                    const std::size_t ni = dom.index(n);
                    if (closed[ni] || !is_free(n)) continue;
                    const double c = cost[ki] + vs * std::sqrt(double(dx * dx + dy * dy + dz * dz));
                    if (c < cost[ni]) {
                        cost[ni] = c;
                        parent[ni] = static_cast<std::int64_t>(ki);
                        keys_by_index[ni] = n;
                        open.emplace(c + heuristic(n), n);
                    }
                }
    }
    if (!found) throw RouteNotFound("goal unreachable");

    for (std::int64_t i = static_cast<std::int64_t>(dom.index(g)); i >= 0; i = parent[static_cast<std::size_t>(i)])
        route.cells.push_back(keys_by_index[static_cast<std::size_t>(i)]);
    std::reverse(route.cells.begin(), route.cells.end());
    route.grid_cost = cost[dom.index(g)];

    route.waypoints.push_back(start);
    for (std::size_t i = 1; i + 1 < route.cells.size(); ++i) {
        Vec3 c = map.center(route.cells[i]);
        c.z() = opts.band.clamp(c.z());
        route.waypoints.push_back(c);
    }
    route.waypoints.push_back(goal);
    for (std::size_t i = 1; i < route.waypoints.size(); ++i)
        route.length += (route.waypoints[i] - route.waypoints[i - 1]).norm();
    return route;
}

struct TaskPriority {
    std::size_t task_index{0};
    std::string task_id;
    bool reachable{false};
    double route_length{std::numeric_limits<double>::infinity()};
    std::size_t entry_viewpoint{0};  // index into the plan's viewpoints
};

/// Orders tasks by route length from the robot to each task's nearest reachable valid viewpoint.
/// Unreachable tasks go last (flagged); ties break by task id.
inline std::vector<TaskPriority> prioritize_tasks(const std::vector<InspectionTask>& tasks,
                                                  const std::vector<ViewPlan>& plans, const Pose6& robot,
                                                  const VoxelMap& map, const RouteOptions& opts = {}) {
    if (tasks.empty()) throw std::invalid_argument("prioritize_tasks: no tasks");
    if (plans.size() != tasks.size()) throw std::invalid_argument("prioritize_tasks: one plan per task required");
    const Vec3 from = robot.position();
    std::vector<TaskPriority> out;
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        TaskPriority p{t, tasks[t].id};
        std::vector<std::size_t> candidates = plans[t].valid_indices();
        std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
            return (plans[t].viewpoints[a].position() - from).norm() < (plans[t].viewpoints[b].position() - from).norm();
        });
        for (std::size_t vi : candidates) {
            try {
                const Route r = plan_route(map, from, plans[t].viewpoints[vi].position(), opts);
                p.reachable = true;
                p.route_length = r.length;
                p.entry_viewpoint = vi;
                break;
            } catch (const RouteNotFound&) {
            }
        }
        out.push_back(p);
    }
    std::stable_sort(out.begin(), out.end(), [](const TaskPriority& a, const TaskPriority& b) {
        if (a.reachable != b.reachable) return a.reachable;
        if (a.reachable && a.route_length != b.route_length) return a.route_length < b.route_length;
        return a.task_id < b.task_id;
    });
    return out;
}

}  // namespace adinsp

#endif  // ADINSP_GLOBAL_ROUTE_HPP_

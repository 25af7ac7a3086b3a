#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <random>

#include <gtest/gtest.h>

#include "adinsp/global/route.hpp"
#include "adinsp/global/tsp.hpp"
#include "adinsp/global/viewpoints.hpp"

using namespace adinsp;

namespace {

constexpr double kPi = std::numbers::pi;

VoxelMap box_map(const std::vector<AxisBox>& boxes) {
    const VoxelMap frame(0.1);
    std::vector<VoxelKey> keys;
    for (const auto& b : boxes) {
        const auto k = keys_in_box(frame, b);
        keys.insert(keys.end(), k.begin(), k.end());
    }
    return VoxelMap::from_keys(std::move(keys), 0.1);
}

// 4 m x 2 m wall patch in the x = 4 plane, wound so its normal faces -x.
InspectionTask wall_task(std::string id = "wall", double x = 4.0) {
    InspectionTask t;
    t.id = std::move(id);
    t.roi = PolygonROI({{x, 0, 0}, {x, 0, 2}, {x, 4, 2}, {x, 4, 0}});
    t.band.reset();
    return t;
}

// tan(a/2) via the half-angle identity, kept apart from the planner's own formula.
double half_tan(double a) { return std::sin(a) / (1.0 + std::cos(a)); }

double brute_force_open_path(const Vec3& start, const std::vector<Vec3>& pts) {
    std::vector<std::size_t> perm(pts.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double c = 0.0;
        Vec3 at = start;
        for (std::size_t i : perm) {
            c += (pts[i] - at).norm();
            at = pts[i];
        }
        best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Plain Dijkstra over the same voxel domain and free-space test the router uses.
std::optional<double> dijkstra_cost(const VoxelMap& map, const Vec3& start, const Vec3& goal,
                                    const RouteOptions& opts) {
    const RouteDomain dom = route_domain(map, start, goal, opts);
    const VoxelKey s = route_cell(map, start, opts.band);
    const VoxelKey g = route_cell(map, goal, opts.band);
    auto free = [&](const VoxelKey& k) {
        return dom.contains(k) && is_collision_free(map, map.center(k), opts.inflation);
    };
    if (!free(s) || !free(g)) return std::nullopt;
    std::map<VoxelKey, double> dist;
    using Item = std::pair<double, VoxelKey>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[s] = 0.0;
    pq.emplace(0.0, s);
    while (!pq.empty()) {
        const auto [d, k] = pq.top();
        pq.pop();
        if (d > dist[k]) continue;
        if (k == g) return d;
        for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (!dx && !dy && !dz) continue;
                    const VoxelKey n{k.x + dx, k.y + dy, k.z + dz};
                    if (!free(n)) continue;
                    const double nd = d + map.voxel_size() * std::sqrt(double(dx * dx + dy * dy + dz * dz));
                    auto it = dist.find(n);
                    if (it == dist.end() || nd < it->second - 1e-12) {
                        dist[n] = nd;
                        pq.emplace(nd, n);
                    }
                }
    }
    return std::nullopt;
}

}  // namespace

TEST(ViewConstraints, SpacingMatchesFootprintModel) {
    const ViewConstraints c;
    const double sh = 2.0 * c.d_view * half_tan(deg2rad(69.5)) * (1.0 - 0.6);
    const double sv = 2.0 * c.d_view * half_tan(deg2rad(45.0)) * (1.0 - 0.6);
    EXPECT_NEAR(c.spacing_h(), sh, 1e-12);
    EXPECT_NEAR(c.spacing_v(), sv, 1e-12);
    // frozen from the oracle above
    EXPECT_NEAR(c.spacing_h(), 1.1099595, 1e-6);
    EXPECT_NEAR(c.spacing_v(), 0.6627417, 1e-6);
    ViewConstraints zero = c;
    zero.gamma_h = 0.0;
    EXPECT_NEAR(zero.spacing_h(), 2.775, 1e-3);
    ViewConstraints bad = c;
    bad.gamma_h = 1.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = c;
    bad.d_view = 0.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(GridViewpoints, WallFacingMinusX) {
    const InspectionTask task = wall_task();
    const ViewPlan plan = generate_grid_viewpoints(task, Vec3(0, 2, 1));
    ASSERT_FALSE(plan.viewpoints.empty());
    EXPECT_FALSE(plan.sparse);
    EXPECT_LT((plan.view_normal - Vec3(-1, 0, 0)).norm(), 1e-12);
    for (const auto& vp : plan.viewpoints) {
        EXPECT_NEAR(vp.x, 2.0, 1e-9);
        EXPECT_NEAR(vp.psi, 0.0, 1e-12);
    }
    // 4 columns x 4 rows for 4 m x 2 m at (1.110, 0.663) spacing
    EXPECT_EQ(plan.viewpoints.size(), 16u);
}

TEST(GridViewpoints, ProjectionSideFollowsRobot) {
    const InspectionTask task = wall_task();
    const ViewPlan behind = generate_grid_viewpoints(task, Vec3(8, 2, 1));
    for (const auto& vp : behind.viewpoints) {
        EXPECT_NEAR(vp.x, 6.0, 1e-9);
        EXPECT_NEAR(std::abs(vp.psi), kPi, 1e-12);
    }
    InspectionTask forced = task;
    forced.side = ViewSide::kOpposite;
    for (const auto& vp : generate_grid_viewpoints(forced, Vec3(0, 2, 1)).viewpoints) EXPECT_NEAR(vp.x, 6.0, 1e-9);
}

TEST(GridViewpoints, GeometryInvariants) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> yaw(-kPi, kPi);
    for (int trial = 0; trial < 10; ++trial) {
        // rotated vertical pentagon
        const double a = yaw(rng);
        const Vec3 h(std::cos(a), std::sin(a), 0.0);
        const Vec3 o(1.0 * trial, -2.0, 0.0);
        std::vector<Vec3> v{o, o + 5 * h, o + 5 * h + Vec3(0, 0, 2), o + 2.5 * h + Vec3(0, 0, 3.2), o + Vec3(0, 0, 2)};
        InspectionTask t;
        t.id = "p";
        t.roi = PolygonROI(v);
        const ViewPlan plan = generate_grid_viewpoints(t);
        const PlaneFrame f = plane_frame(t.roi);
        ASSERT_EQ(plan.grid_points.size(), plan.viewpoints.size());
        for (std::size_t i = 0; i < plan.viewpoints.size(); ++i) {
            EXPECT_NEAR(std::abs(t.roi.signed_distance(plan.viewpoints[i].position())), 2.0, 1e-9);
            EXPECT_TRUE(point_in_polygon(t.roi, f.to_world(plan.grid_points[i])));
        }
        // same-row neighbours are s_H apart
        std::map<long, std::vector<double>> rows;
        for (const auto& g : plan.grid_points) rows[std::lround(g.y() * 1e6)].push_back(g.x());
        for (auto& [_, xs] : rows) {
            std::sort(xs.begin(), xs.end());
            for (std::size_t i = 1; i < xs.size(); ++i) EXPECT_NEAR(xs[i] - xs[i - 1], plan.spacing_h, 1e-9);
        }
        std::vector<double> ys;
        for (const auto& [k, _] : rows) ys.push_back(k * 1e-6);
        for (std::size_t i = 1; i < ys.size(); ++i) EXPECT_NEAR(ys[i] - ys[i - 1], plan.spacing_v, 2e-6);
    }
}

TEST(GridViewpoints, FootprintsCoverRoi) {
    const InspectionTask task = wall_task();
    const ViewPlan plan = generate_grid_viewpoints(task, Vec3(0, 2, 1));
    const PlaneFrame f = plane_frame(task.roi);
    const double half_w = 0.5 * task.constraints.footprint_width(task.constraints.d_view);
    const double half_h = 0.5 * task.constraints.footprint_height(task.constraints.d_view);
    std::size_t inside = 0, covered = 0;
    for (int i = 0; i <= 200; ++i)
        for (int j = 0; j <= 100; ++j) {
            const Vec3 p(4.0, 4.0 * i / 200, 2.0 * j / 100);
            if (!point_in_polygon(task.roi, p)) continue;
            ++inside;
            const Eigen::Vector2d uv = f.to_plane(p);
            for (const auto& g : plan.grid_points) {
                if (std::abs(uv.x() - g.x()) <= half_w && std::abs(uv.y() - g.y()) <= half_h) {
                    ++covered;
                    break;
                }
            }
        }
    ASSERT_GT(inside, 0u);
    EXPECT_GE(static_cast<double>(covered) / inside, 0.99);
}

TEST(GridViewpoints, HeightBandDropsRows) {
    InspectionTask task = wall_task();
    task.band = HeightBand{0.5, 1.5};
    const ViewPlan plan = generate_grid_viewpoints(task, Vec3(0, 2, 1));
    ASSERT_FALSE(plan.viewpoints.empty());
    for (const auto& vp : plan.viewpoints) EXPECT_TRUE(task.band->contains(vp.z));
    EXPECT_EQ(plan.viewpoints.size(), 8u);
    EXPECT_FALSE(plan.warnings.empty());

    task.band = HeightBand{0.6, 0.6};
    const ViewPlan single = generate_grid_viewpoints(task, Vec3(0, 2, 1));
    EXPECT_EQ(single.viewpoints.size(), 4u);
    for (const auto& vp : single.viewpoints) EXPECT_NEAR(vp.z, 0.6, 1e-12);
}

TEST(GridViewpoints, TinyRoiFallsBackToCentroid) {
    InspectionTask task;
    task.id = "tiny";
    task.roi = PolygonROI({{4, 0.1, 0}, {4, 0.2, 0.1}, {4, 0.1, 0.2}, {4, 0, 0.1}});
    const ViewPlan plan = generate_grid_viewpoints(task, Vec3(0, 0, 0));
    EXPECT_TRUE(plan.sparse);
    ASSERT_EQ(plan.viewpoints.size(), 1u);
    EXPECT_LT((plan.viewpoints[0].position() - Vec3(2, 0.1, 0.1)).norm(), 1e-9);
}

TEST(FilterViewpoints, Examples) {
    const InspectionTask task = wall_task();
    const ViewPlan plan = generate_grid_viewpoints(task, Vec3(0, 2, 1));
    const ViewPlan all = filter_viewpoints(plan, VoxelMap(), 0.5);
    EXPECT_EQ(all.valid_count(), plan.viewpoints.size());

    const Vec3 target = plan.viewpoints[5].position();
    const VoxelMap block = box_map({{target - Vec3::Constant(0.1), target + Vec3::Constant(0.1)}});
    const ViewPlan one = filter_viewpoints(plan, block, 0.5);
    EXPECT_EQ(one.valid_count(), plan.viewpoints.size() - 1);
    EXPECT_FALSE(one.valid[5]);
    ASSERT_EQ(one.invalid_log.size(), 1u);
    EXPECT_EQ(one.invalid_log[0], 5u);

    const VoxelMap everything = box_map({{{1.5, -1, -1}, {2.5, 5, 3}}});
    EXPECT_THROW(filter_viewpoints(plan, everything, 0.5), TaskUnreachable);
}

TEST(PlanRoute, Examples) {
    const Route same = plan_route(VoxelMap(), Vec3(1, 1, 0.6), Vec3(1, 1, 0.6));
    EXPECT_EQ(same.waypoints.size(), 1u);
    EXPECT_DOUBLE_EQ(same.length, 0.0);

    const Route straight = plan_route(VoxelMap(), Vec3(0, 0, 0.6), Vec3(5, 0, 0.6));
    EXPECT_NEAR(straight.length, 5.0, 0.1 * std::sqrt(3.0));
    EXPECT_EQ(straight.waypoints.front(), Vec3(0, 0, 0.6));
    EXPECT_EQ(straight.waypoints.back(), Vec3(5, 0, 0.6));
    for (const auto& w : straight.waypoints) EXPECT_NEAR(w.z(), 0.6, 1e-12);
}

TEST(PlanRoute, PassesThroughGap) {
    // wall at x in [2, 2.2] with a 1.5 m gap at y in [0.5, 2]
    const VoxelMap wall = box_map({{{2, -4, 0}, {2.2, 0.5, 2}}, {{2, 2, 0}, {2.2, 6, 2}}});
    RouteOptions opts;
    const Vec3 a(0, -1, 0.6), b(4, -1, 0.6);
    const Route r = plan_route(wall, a, b, opts);
    bool through = false;
    for (const auto& w : r.waypoints)
        if (std::abs(w.x() - 2.1) < 0.06) through = through || (w.y() > 0.5 && w.y() < 2.0);
    EXPECT_TRUE(through);
    for (const auto& w : r.waypoints) EXPECT_TRUE(is_collision_free(wall, w, opts.inflation));
    const auto oracle = dijkstra_cost(wall, a, b, opts);
    ASSERT_TRUE(oracle.has_value());
    EXPECT_NEAR(r.grid_cost, *oracle, 1e-9);

    const VoxelMap closed = box_map({{{2, -8, 0}, {2.2, 8, 2}}});
    RouteOptions tight;
    tight.margin = 0.0;  // domain y-range equals the wall span, so no way around
    EXPECT_THROW(plan_route(closed, a, b, tight), RouteNotFound);
    EXPECT_THROW(plan_route(wall, a, Vec3(2.1, -2, 0.6), opts), RouteNotFound);
}

TEST(PlanRoute, MatchesDijkstraOnRandomPairs) {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(0, 6);
    std::vector<AxisBox> boxes;
    for (int i = 0; i < 5; ++i) {
        const Vec3 c(u(rng), u(rng), 0.0);
        boxes.push_back({c, c + Vec3(0.6, 0.8, 1.5)});
    }
    const VoxelMap map = box_map(boxes);
    RouteOptions opts;
    opts.margin = 1.0;
    int compared = 0;
    for (int i = 0; i < 50; ++i) {
        Vec3 a, b;
        do a = Vec3(u(rng), u(rng), 0.6); while (!is_collision_free(map, map.center(route_cell(map, a, opts.band)), 0.5));
        do b = Vec3(u(rng), u(rng), 0.6); while (!is_collision_free(map, map.center(route_cell(map, b, opts.band)), 0.5));
        const auto oracle = dijkstra_cost(map, a, b, opts);
        if (!oracle) {
            EXPECT_THROW(plan_route(map, a, b, opts), RouteNotFound);
            continue;
        }
        const Route r = plan_route(map, a, b, opts);
        EXPECT_NEAR(r.grid_cost, *oracle, 1e-9);
        ++compared;
    }
    EXPECT_GT(compared, 40);
}

TEST(PrioritizeTasks, NearerFirstAndTieById) {
    const Pose6 robot = Pose6::from({0, 2, 0.6}, 0.0);
    std::vector<InspectionTask> tasks{wall_task("far", 12.0), wall_task("near", 4.0)};
    std::vector<ViewPlan> plans;
    for (const auto& t : tasks) plans.push_back(generate_grid_viewpoints(t, robot.position()));
    const auto order = prioritize_tasks(tasks, plans, robot, VoxelMap());
    ASSERT_EQ(order.size(), 2u);
    EXPECT_EQ(order[0].task_id, "near");
    EXPECT_LT(order[0].route_length, order[1].route_length);

    std::vector<InspectionTask> twins{wall_task("b"), wall_task("a")};
    std::vector<ViewPlan> twin_plans;
    for (const auto& t : twins) twin_plans.push_back(generate_grid_viewpoints(t, robot.position()));
    const auto tie = prioritize_tasks(twins, twin_plans, robot, VoxelMap());
    EXPECT_EQ(tie[0].task_id, "a");
    EXPECT_EQ(tie[1].task_id, "b");

    const auto single = prioritize_tasks({tasks[0]}, {plans[0]}, robot, VoxelMap());
    ASSERT_EQ(single.size(), 1u);
    EXPECT_EQ(single[0].task_id, "far");
    EXPECT_TRUE(single[0].reachable);
}

TEST(PrioritizeTasks, UnreachableGoesLast) {
    const Pose6 robot = Pose6::from({0, 2, 0.6}, 0.0);
    // an enclosure around the robot
    const VoxelMap cage = box_map({{{-1.5, 0.5, 0}, {-1.3, 3.5, 2}},
                                   {{1.3, 0.5, 0}, {1.5, 3.5, 2}},
                                   {{-1.5, 0.5, 0}, {1.5, 0.7, 2}},
                                   {{-1.5, 3.3, 0}, {1.5, 3.5, 2}}});
    std::vector<InspectionTask> tasks{wall_task("a", 4.0), wall_task("b", 4.0)};
    std::vector<ViewPlan> plans;
    for (const auto& t : tasks) plans.push_back(generate_grid_viewpoints(t, robot.position()));
    const auto order = prioritize_tasks(tasks, plans, robot, cage, RouteOptions{0.5, {}, 1.0});
    for (const auto& p : order) EXPECT_FALSE(p.reachable);
}

TEST(SaTsp, SmallExamples) {
    const Tour one = solve_open_tsp({Vec3(3, 4, 0)}, Vec3::Zero(), 1);
    EXPECT_DOUBLE_EQ(one.length, 5.0);
    const std::vector<Vec3> square{{1, 1, 0}, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    const Tour t = solve_open_tsp(square, Vec3::Zero(), 3);
    EXPECT_NEAR(t.length, 3.0, 1e-12);
    EXPECT_NEAR(brute_force_open_path(Vec3::Zero(), square), 3.0, 1e-12);
}

TEST(SaTsp, NearOptimalAndNeverWorseThanGreedy) {
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> u(0, 10);
    std::uniform_int_distribution<int> n(2, 8);
    for (int inst = 0; inst < 6; ++inst) {
        std::vector<Vec3> pts(static_cast<std::size_t>(n(rng)));
        for (auto& p : pts) p = Vec3(u(rng), u(rng), 0.6);
        const Vec3 start(u(rng), u(rng), 0.6);
        const double opt = brute_force_open_path(start, pts);
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            SaTspOptions opts;
            opts.record_trace = true;
            const Tour t = solve_open_tsp(pts, start, seed, opts);
            EXPECT_LE(t.length, 1.05 * opt + 1e-9);
            EXPECT_LE(t.length, t.initial_length + 1e-12);
            for (std::size_t i = 1; i < t.best_trace.size(); ++i) EXPECT_LE(t.best_trace[i], t.best_trace[i - 1]);
            std::vector<std::size_t> sorted = t.order;
            std::sort(sorted.begin(), sorted.end());
            for (std::size_t i = 0; i < sorted.size(); ++i) EXPECT_EQ(sorted[i], i);
            const Tour again = solve_open_tsp(pts, start, seed, opts);
            EXPECT_EQ(again.order, t.order);
        }
    }
}

TEST(SaTsp, TourCoversValidViewpointsOnly) {
    const InspectionTask task = wall_task();
    ViewPlan plan = generate_grid_viewpoints(task, Vec3(0, 2, 1));
    plan.valid[2] = plan.valid[7] = false;
    const Tour t = solve_tour_sa_tsp(plan, Vec3(0, 2, 0.6), 1);
    std::vector<std::size_t> got = t.order;
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, plan.valid_indices());
    const PathSegment poses = tour_poses(t, plan);
    ASSERT_EQ(poses.size(), t.size());
    EXPECT_EQ(poses.front().position(), plan.viewpoints[t.order.front()].position());
    plan.valid.assign(plan.valid.size(), false);
    EXPECT_THROW(solve_tour_sa_tsp(plan, Vec3::Zero(), 1), TaskUnreachable);
}

#ifndef ADINSP_APP_RUNNER_HPP_
#define ADINSP_APP_RUNNER_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adinsp/app/scenario.hpp"
#include "adinsp/global/tsp.hpp"

namespace adinsp {

/// Everything decided before the robot moves. Shared verbatim by adaptive and baseline runs.
struct PlanArtifacts {
    std::vector<ViewPlan> plans;               // one per scenario task, collision-filtered
    std::vector<std::string> unreachable;      // tasks with no valid or routable viewpoint
    std::vector<TaskPriority> order;           // prioritized, reachable first
    std::vector<std::size_t> task_sequence;    // indices of the tasks to execute, in order
    std::vector<Tour> tours;                   // parallel to task_sequence
    std::vector<PathSegment> tour_paths;       // parallel to task_sequence

    bool any_reachable() const { return !task_sequence.empty(); }
};

inline PlanArtifacts plan_mission(const Scenario& sc) {
    PlanArtifacts a;
    const VoxelMap& map = sc.planning_map();
    for (const auto& task : sc.tasks) {
        ViewPlan plan = generate_grid_viewpoints(task, sc.start.position());
        try {
            plan = filter_viewpoints(std::move(plan), map, sc.robot.inflation);
        } catch (const TaskUnreachable&) {
            plan.valid.assign(plan.viewpoints.size(), false);
            plan.warnings.push_back("every viewpoint is in collision");
        }
        a.plans.push_back(std::move(plan));
    }
    a.order = prioritize_tasks(sc.tasks, a.plans, sc.start, map, sc.route_options());
    Vec3 from = sc.start.position();
    for (const auto& p : a.order) {
        if (!p.reachable) {
            a.unreachable.push_back(p.task_id);
            continue;
        }
        const ViewPlan& plan = a.plans[p.task_index];
        Tour tour = solve_tour_sa_tsp(plan, from, sc.seed);
        a.task_sequence.push_back(p.task_index);
        a.tour_paths.push_back(tour_poses(tour, plan));
        from = a.tour_paths.back().back().position();
        a.tours.push_back(std::move(tour));
    }
    return a;
}

enum class RunStatus { kCompleted, kTimeout, kAborted };

inline const char* to_string(RunStatus s) {
    switch (s) {
        case RunStatus::kCompleted: return "completed";
        case RunStatus::kTimeout: return "timeout";
        case RunStatus::kAborted: return "aborted";
    }
    return "?";
}

struct TraceSample {
    double t{0.0};
    Pose6 pose;
    bool blocked{false};
    double speed{0.0};
};

/// Global, local, and aligned segments of one supervision cycle, for plotting.
struct CycleSegments {
    double t{0.0};
    PathSegment gvp, lvp, gvp_hat;
};

struct TaskOutcome {
    std::string task_id;
    bool completed{false};
    bool aborted{false};
    std::size_t visited{0};
    std::size_t approx_credits{0};
    std::size_t tour_size{0};
};

struct MissionRun {
    RunStatus status{RunStatus::kCompleted};
    MissionLog log;
    MissionSummary summary;
    std::vector<TraceSample> trace;
    std::vector<CycleSegments> segments;
    std::vector<TaskOutcome> tasks;
    std::vector<std::string> unreachable;
};

namespace detail {

class Simulation {
public:
    Simulation(const Scenario& sc, const PlanArtifacts& plan, bool adaptive)
        : sc_(sc), plan_(plan), noise_(sc.sim.odom_sigma_xy, sc.sim.odom_sigma_psi, sc.seed) {
        cfg_ = sc.supervisor;
        cfg_.adaptive = adaptive;
        cfg_.local.horizon = cfg_.horizon;
        robot_ = sc.robot;
        robot_.pose = sc.start;
        const auto& k = sc.scene.historical.keys();
        known_.insert(k.begin(), k.end());
    }

    MissionRun run() {
        MissionRun out;
        out.unreachable = plan_.unreachable;
        if (!plan_.any_reachable()) {
            out.status = RunStatus::kAborted;
            return finish(out);
        }
        for (std::size_t i = 0; i < plan_.task_sequence.size(); ++i) {
            const InspectionTask& task = sc_.tasks[plan_.task_sequence[i]];
            TaskOutcome outcome{task.id};
            outcome.tour_size = plan_.tour_paths[i].size();
            const RunStatus st = run_task(task, plan_.tour_paths[i], out, outcome);
            out.tasks.push_back(outcome);
            if (st == RunStatus::kTimeout) {
                out.status = RunStatus::kTimeout;
                return finish(out);
            }
            if (st == RunStatus::kAborted) out.status = RunStatus::kAborted;
        }
        return finish(out);
    }

private:
    double now() const { return static_cast<double>(ticks_) * sc_.sim.dt; }
    bool out_of_time() const { return now() >= sc_.sim.max_time - 1e-9; }

    MissionRun& finish(MissionRun& out) {
        out.log.duration = now();
        out.log.completed = out.status == RunStatus::kCompleted;
        out.summary = summarize(out.log, sc_.d_view());
        return out;
    }

    void tick(const ViewPose4& ref, MissionRun& out) {
        robot_ = track_step(robot_, ref, sc_.scene.current, sc_.sim.dt);
        ++ticks_;
        out.trace.push_back({now(), robot_.pose, robot_.blocked, robot_.speed});
    }

    bool reached(const ViewPose4& ref) const {
        return (robot_.pose.position() - ref.position()).norm() <= sc_.sim.reach_tol &&
               std::abs(wrap_angle(robot_.pose.psi - ref.psi)) <= sc_.sim.reach_yaw_tol;
    }

    /// Tracks one reference until reached, blocked, timed out, or out of mission time.
    /// Returns true when the reference was reached.
    bool track_direct(const ViewPose4& ref, MissionRun& out) {
        const long max_ticks = std::lround(sc_.sim.ref_timeout / sc_.sim.dt);
        for (long n = 0; n < max_ticks && !out_of_time(); ++n) {
            tick(ref, out);
            if (robot_.blocked) return false;
            if (reached(ref)) return true;
        }
        return false;
    }

    /// Straight to the reference if the known map allows it, otherwise along a grid route.
    bool track(const ViewPose4& ref, MissionRun& out) {
        const VoxelMap& known = knowledge_map();
        if (!is_collision_free(known, robot_.pose.position(), ref.position(), robot_.inflation)) {
            Route route;
            try {
                route = plan_route(known, robot_.pose.position(), ref.position(), sc_.route_options());
            } catch (const RouteNotFound&) {
                tick(to_view_pose(robot_.pose), out);
                robot_.blocked = true;
                return false;
            }
            for (std::size_t w = 1; w + 1 < route.waypoints.size(); ++w)
                if (!track_direct(ViewPose4::from(route.waypoints[w], ref.psi), out)) return false;
        }
        return track_direct(ref, out);
    }

    const VoxelMap& knowledge_map() {
        if (sc_.knowledge == MapKnowledge::kPrebuilt) return sc_.scene.current;
        if (known_dirty_) {
            known_map_ = VoxelMap::from_keys(std::vector<VoxelKey>(known_.begin(), known_.end()),
                                             sc_.scene.historical.voxel_size(), sc_.scene.historical.origin());
            known_dirty_ = false;
        }
        return known_map_;
    }

    /// Moves to the first tour viewpoint.
    RunStatus transit(const ViewPose4& goal, MissionRun& out) {
        int failures = 0;
        while (!track(goal, out)) {
            if (out_of_time()) return RunStatus::kTimeout;
            if (++failures > cfg_.max_retries) return RunStatus::kAborted;
        }
        return RunStatus::kCompleted;
    }

    RunStatus run_task(const InspectionTask& task, const PathSegment& tour, MissionRun& out, TaskOutcome& outcome) {
        cfg_.local.constraints = task.constraints;
        const RunStatus tr = transit(tour.front(), out);
        if (tr != RunStatus::kCompleted) {
            outcome.aborted = tr == RunStatus::kAborted;
            return tr;
        }
        CameraIntrinsics camera = sc_.camera;
        camera.alpha = task.constraints.alpha;
        camera.beta = task.constraints.beta;

        MissionState state = MissionState::start(task.id, tour);
        while (true) {
            if (out_of_time()) {
                outcome.visited = state.visited_count;
                outcome.approx_credits = state.approx_credits;
                return RunStatus::kTimeout;
            }
            const VoxelMap observed = sc_.sensor.observe(sc_.scene.current, robot_.pose);
            if (sc_.knowledge == MapKnowledge::kDiscovered) {
                const std::size_t before = known_.size();
                known_.insert(observed.keys().begin(), observed.keys().end());
                known_dirty_ = known_dirty_ || known_.size() != before;
            }
            const PointCloud cloud = sc_.sensor.scan(observed, robot_.pose);
            const SenseFn sense = [&](const Pose6& p) { return sc_.sensor.scan(observed, p); };
            const Pose6 odom = noise_.apply(robot_.pose);

            StepResult step = step_mission(std::move(state), cfg_, odom, cloud, sense);
            state = std::move(step.state);
            if (step.completed) {
                outcome.completed = true;
                outcome.visited = state.visited_count;
                outcome.approx_credits = state.approx_credits;
                return RunStatus::kCompleted;
            }
            if (state.aborted) {
                outcome.aborted = true;
                outcome.visited = state.visited_count;
                outcome.approx_credits = state.approx_credits;
                return RunStatus::kAborted;
            }

            CycleRecord rec;
            rec.t = now();
            rec.task_id = task.id;
            rec.mode = state.mode;
            rec.cursor = state.cursor;
            rec.visited = state.visited_count;
            if (!cloud.empty()) rec.viewing_distance = viewing_distance(robot_.pose, cloud);
            try {
                rec.utility = viewpoint_utility(render_depth(sc_.scene.current, robot_.pose, camera), camera);
            } catch (const GeometryError&) {
            }

            if (!step.reference) {
                // Sensing failed: hold position for one tick and retry.
                rec.f_d = rec.gamma_s = rec.rmse_pre = rec.rmse_post = std::numeric_limits<double>::quiet_NaN();
                rec.reference = to_view_pose(robot_.pose);
                out.log.append(rec);
                tick(rec.reference, out);
                continue;
            }
            rec.f_d = step.score.f_d;
            rec.gamma_s = step.score.gamma_s;
            rec.rmse_pre = step.rmse_pre;
            rec.rmse_post = step.rmse_post;
            rec.aligned = step.aligned;
            rec.fallback = step.fallback;
            rec.reference = *step.reference;
            out.segments.push_back({rec.t, state.gvp, state.lvp, state.gvp_hat});

            const bool ok = track(*step.reference, out);
            rec.blocked = robot_.blocked;
            out.log.append(rec);
            if (ok) {
                state.retries = 0;
            } else if (!out_of_time()) {
                register_failure(state, cfg_);
            }
        }
    }

    const Scenario& sc_;
    const PlanArtifacts& plan_;
    SupervisorConfig cfg_;
    RobotState robot_;
    OdometryNoise noise_;
    std::set<VoxelKey> known_;  // discovered mode: historical map plus everything sensed so far
    VoxelMap known_map_;
    bool known_dirty_{true};
    long ticks_{0};
};

}  // namespace detail

/// Simulates the mission on the scenario's current map using precomputed plans.
inline MissionRun run_mission(const Scenario& sc, const PlanArtifacts& plan, bool adaptive) {
    detail::Simulation sim(sc, plan, adaptive);
    return sim.run();
}

inline MissionRun run_mission(const Scenario& sc) { return run_mission(sc, plan_mission(sc), sc.adaptive); }

}  // namespace adinsp

#endif  // ADINSP_APP_RUNNER_HPP_

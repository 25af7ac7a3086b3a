#ifndef ADINSP_MISSION_SUPERVISOR_HPP_
#define ADINSP_MISSION_SUPERVISOR_HPP_

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adinsp/geometry/frechet.hpp"
#include "adinsp/geometry/kabsch.hpp"
#include "adinsp/global/tsp.hpp"
#include "adinsp/local/view_planner.hpp"
#include "adinsp/mission/metrics.hpp"

namespace adinsp {

struct SimilarityScore {
    double gamma_s{1.0};
    double f_d{0.0};
};

inline SimilarityScore similarity_from_distance(double f_d) {
    if (!(f_d >= 0.0)) throw std::invalid_argument("Frechet distance must be non-negative");
    return {1.0 / (1.0 + f_d), f_d};
}

inline SimilarityScore path_similarity(const PathSegment& gvp, const PathSegment& lvp) {
    return similarity_from_distance(discrete_frechet(gvp, lvp));
}

/// Replan on deviation: REPLANNED iff gamma_s < gamma_t (equality stays GLOBAL).
inline Mode decide(const SimilarityScore& score, double gamma_t) {
    return score.gamma_s < gamma_t ? Mode::kReplanned : Mode::kGlobal;
}

/// Next N tour poses from the cursor, padded with the final pose.
inline PathSegment extract_global_segment(const PathSegment& tour, std::size_t cursor, int n) {
    if (n < 1) throw std::invalid_argument("extract_global_segment: N must be >= 1");
    if (cursor >= tour.size()) throw std::out_of_range("extract_global_segment: cursor past the end of the tour");
    PathSegment out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(tour[std::min(cursor + static_cast<std::size_t>(i), tour.size() - 1)]);
    return out;
}

inline PathSegment extract_global_segment(const Tour& tour, const ViewPlan& plan, std::size_t cursor, int n) {
    return extract_global_segment(tour_poses(tour, plan), cursor, n);
}

struct Reconciliation {
    PathSegment reference;
    PathSegment aligned;  // global segment as used for progress accounting
    bool applied{false};
    bool degenerate{false};
};

inline Reconciliation reconcile(const PathSegment& gvp, const PathSegment& lvp, Mode mode) {
    if (gvp.size() != lvp.size()) throw GeometryError("reconcile: segments differ in length");
    if (mode == Mode::kGlobal) return {gvp, gvp, false, false};
    const KabschResult k = kabsch_align(gvp, lvp);
    return {lvp, apply_transform(k.transform, gvp), true, k.degenerate};
}

struct SupervisorConfig {
    double gamma_t{0.5};
    int horizon{5};
    double pos_tol{0.3};
    double yaw_tol{0.2};
    int max_retries{10};
    // Cycles without progress after which the global pose is tracked directly (0 disables).
    int stall_cycles{5};
    bool adaptive{true};  // false: baseline, always track the global tour
    LocalPlanConfig local;

    void validate() const {
        if (!(gamma_t > 0.0 && gamma_t <= 1.0)) throw std::invalid_argument("gamma_t must lie in (0, 1]");
        if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
        if (!(pos_tol > 0.0) || !(yaw_tol > 0.0)) throw std::invalid_argument("visit tolerances must be positive");
        if (max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
        if (stall_cycles < 0) throw std::invalid_argument("stall_cycles must be >= 0");
        local.validate();
    }
};

struct MissionState {
    std::string task_id;
    PathSegment tour;  // Z*, in visiting order
    std::size_t cursor{0};
    Mode mode{Mode::kGlobal};
    PathSegment gvp, lvp, gvp_hat;
    std::vector<bool> visited;
    std::size_t visited_count{0};
    std::size_t approx_credits{0};  // viewpoints credited through their aligned counterpart
    int retries{0};
    int stalled{0};  // consecutive cycles without progress
    bool aborted{false};
    // Aligned counterpart of tour[cursor] from the last REPLANNED cycle and its alignment residual.
    std::optional<Vec3> counterpart;
    double counterpart_rmse{0.0};

    static MissionState start(std::string task_id, PathSegment tour) {
        if (tour.empty()) throw std::invalid_argument("MissionState: empty tour");
        MissionState s;
        s.task_id = std::move(task_id);
        s.visited.assign(tour.size(), false);
        s.tour = std::move(tour);
        return s;
    }
};

inline bool check_completion(const MissionState& state) {
    return !state.visited.empty() && state.visited_count == state.visited.size();
}

/// Counts a failed cycle (no sensing, blocked motion). Aborts past max_retries consecutive failures.
inline void register_failure(MissionState& state, const SupervisorConfig& cfg) {
    if (++state.retries > cfg.max_retries) state.aborted = true;
}

struct StepResult {
    MissionState state;
    std::optional<ViewPose4> reference;  // empty: completed, aborted, or hold
    SimilarityScore score;
    double rmse_pre{0.0};
    double rmse_post{0.0};
    bool aligned{false};
    bool completed{false};
    bool sensing_failed{false};
    bool short_prediction{false};
    bool fallback{false};  // stall guard forced GLOBAL tracking
};

namespace detail {

/// Marks tour[cursor] visited if the robot is at it, or at its aligned counterpart with a small residual.
inline bool update_progress(MissionState& s, const Pose6& robot, const SupervisorConfig& cfg) {
    const std::size_t before = s.cursor;
    while (s.cursor < s.tour.size()) {
        const ViewPose4& vp = s.tour[s.cursor];
        const bool direct = (robot.position() - vp.position()).norm() <= cfg.pos_tol &&
                            std::abs(wrap_angle(robot.psi - vp.psi)) <= cfg.yaw_tol;
        const bool approx = s.counterpart && (robot.position() - *s.counterpart).norm() <= cfg.pos_tol &&
                            s.counterpart_rmse < cfg.pos_tol;
        if (!direct && !approx) break;
        s.visited[s.cursor] = true;
        ++s.visited_count;
        if (!direct) ++s.approx_credits;
        ++s.cursor;
        s.counterpart.reset();
    }
    return s.cursor != before;
}

}  // namespace detail

/// One supervision cycle: progress check, global segment, local prediction, similarity, decision,
/// reconciliation. Emits the first pose of the chosen reference path. If the cursor has not moved for
/// `stall_cycles` cycles, the global pose is tracked regardless of the decision.
inline StepResult step_mission(MissionState state, const SupervisorConfig& cfg, const Pose6& odom,
                               const PointCloud& cloud, const SenseFn& sense) {
    StepResult r;
    if (state.aborted) {
        r.state = std::move(state);
        return r;
    }
    if (detail::update_progress(state, odom, cfg)) state.stalled = 0;
    else ++state.stalled;
    if (state.cursor >= state.tour.size()) {
        r.completed = true;
        r.state = std::move(state);
        return r;
    }

    state.gvp = extract_global_segment(state.tour, state.cursor, cfg.horizon);
    LocalPrediction pred;
    bool sensed = !cloud.empty();
    if (sensed) {
        LocalPlanConfig local = cfg.local;
        local.horizon = cfg.horizon;
        try {
            pred = predict_local_path(odom, cloud, sense, state.gvp, local);
        } catch (const GeometryError&) {
            sensed = false;
        }
    }
    if (!sensed || pred.path.empty()) {
        r.sensing_failed = true;
        register_failure(state, cfg);
        r.state = std::move(state);
        return r;
    }
    r.short_prediction = pred.short_horizon;
    while (pred.path.size() < state.gvp.size()) pred.path.push_back(pred.path.back());
    state.lvp = std::move(pred.path);

    r.score = path_similarity(state.gvp, state.lvp);
    r.rmse_pre = path_rmse(state.gvp, state.lvp);
    state.mode = cfg.adaptive ? decide(r.score, cfg.gamma_t) : Mode::kGlobal;
    if (state.mode == Mode::kReplanned && cfg.stall_cycles > 0 && state.stalled >= cfg.stall_cycles) {
        state.mode = Mode::kGlobal;
        r.fallback = true;
    }
    Reconciliation rec = reconcile(state.gvp, state.lvp, state.mode);
    state.gvp_hat = rec.aligned;
    r.rmse_post = path_rmse(state.gvp_hat, state.lvp);
    r.aligned = rec.applied;
    if (state.mode == Mode::kReplanned) {
        state.counterpart = state.gvp_hat.front().position();
        state.counterpart_rmse = r.rmse_post;
    } else {
        state.counterpart.reset();
    }
    r.reference = rec.reference.front();
    r.state = std::move(state);
    return r;
}

}  // namespace adinsp

#endif  // ADINSP_MISSION_SUPERVISOR_HPP_

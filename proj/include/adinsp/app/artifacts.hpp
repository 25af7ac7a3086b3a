#ifndef ADINSP_APP_ARTIFACTS_HPP_
#define ADINSP_APP_ARTIFACTS_HPP_

#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "adinsp/app/runner.hpp"

namespace adinsp {

namespace fs = std::filesystem;

namespace detail {

inline std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
}

// Rounded so the text form is stable across runs and platforms.
inline double round6(double v) { return std::isfinite(v) ? std::round(v * 1e6) / 1e6 : v; }

inline nlohmann::json pose_json(const ViewPose4& p) {
    return {round6(p.x), round6(p.y), round6(p.z), round6(p.psi)};
}

inline nlohmann::json nullable(double v) { return std::isfinite(v) ? nlohmann::json(round6(v)) : nlohmann::json(); }

}  // namespace detail

inline nlohmann::json tours_json(const Scenario& sc, const PlanArtifacts& a) {
    nlohmann::json tours = nlohmann::json::array();
    for (std::size_t i = 0; i < a.task_sequence.size(); ++i) {
        nlohmann::json poses = nlohmann::json::array();
        for (const auto& p : a.tour_paths[i]) poses.push_back(detail::pose_json(p));
        tours.push_back({{"task", sc.tasks[a.task_sequence[i]].id},
                         {"order", a.tours[i].order},
                         {"length", detail::round6(a.tours[i].length)},
                         {"initial_length", detail::round6(a.tours[i].initial_length)},
                         {"poses", poses}});
    }
    return {{"seed", sc.seed}, {"tours", tours}};
}

inline nlohmann::json task_order_json(const PlanArtifacts& a) {
    nlohmann::json order = nlohmann::json::array();
    for (const auto& p : a.order) {
        order.push_back({{"task", p.task_id},
                         {"reachable", p.reachable},
                         {"route_length", p.reachable ? detail::nullable(p.route_length) : nlohmann::json()},
                         {"entry_viewpoint", p.entry_viewpoint}});
    }
    return {{"order", order}, {"unreachable", a.unreachable}};
}

/// plan/viewpoints_<task>.csv, plan/tours.json, plan/task_order.json
inline void write_plan(const fs::path& dir, const Scenario& sc, const PlanArtifacts& a) {
    fs::create_directories(dir);
    for (const auto& plan : a.plans) {
        auto out = detail::open_out(dir / ("viewpoints_" + plan.task_id + ".csv"));
        out << "index,x,y,z,psi,valid\n";
        for (std::size_t i = 0; i < plan.viewpoints.size(); ++i) {
            const auto& v = plan.viewpoints[i];
            out << i << ',' << detail::fmt(v.x) << ',' << detail::fmt(v.y) << ',' << detail::fmt(v.z) << ','
                << detail::fmt(v.psi) << ',' << (plan.valid[i] ? 1 : 0) << '\n';
        }
    }
    detail::open_out(dir / "tours.json") << tours_json(sc, a).dump(2) << '\n';
    detail::open_out(dir / "task_order.json") << task_order_json(a).dump(2) << '\n';
}

inline nlohmann::json summary_json(const Scenario& sc, const MissionRun& run, bool adaptive) {
    const MissionSummary& s = run.summary;
    nlohmann::json tasks = nlohmann::json::array();
    for (const auto& t : run.tasks)
        tasks.push_back({{"task", t.task_id},
                         {"completed", t.completed},
                         {"aborted", t.aborted},
                         {"visited", t.visited},
                         {"approx_credits", t.approx_credits},
                         {"tour_size", t.tour_size}});
    return {{"scenario", sc.name},
            {"mode", adaptive ? "adaptive" : "baseline"},
            {"seed", sc.seed},
            {"status", to_string(run.status)},
            {"completed", s.completed},
            {"duration", detail::round6(s.duration)},
            {"cycles", s.cycles},
            {"mean_utility", detail::nullable(s.mean_utility)},
            {"min_utility", detail::nullable(s.min_utility)},
            {"replanned_percent", detail::round6(s.replanned_percent)},
            {"time_to_reconverge", s.time_to_reconverge ? detail::nullable(*s.time_to_reconverge) : nlohmann::json()},
            {"mean_distance_error", detail::nullable(s.mean_distance_error)},
            {"min_distance_error", detail::nullable(s.min_distance_error)},
            {"tasks", tasks},
            {"unreachable", run.unreachable}};
}

/// mission_log.csv, trace.csv, local_paths.csv, summary.json and gnuplot column files.
inline void write_run(const fs::path& dir, const Scenario& sc, const MissionRun& run, bool adaptive) {
    fs::create_directories(dir);
    {
        auto out = detail::open_out(dir / "mission_log.csv");
        write_log_csv(out, run.log);
    }
    {
        auto out = detail::open_out(dir / "trace.csv");
        out << "t,x,y,z,psi,blocked,speed\n";
        for (const auto& s : run.trace)
            out << detail::fmt(s.t, 3) << ',' << detail::fmt(s.pose.x) << ',' << detail::fmt(s.pose.y) << ','
                << detail::fmt(s.pose.z) << ',' << detail::fmt(s.pose.psi) << ',' << (s.blocked ? 1 : 0) << ','
                << detail::fmt(s.speed) << '\n';
    }
    {
        auto out = detail::open_out(dir / "local_paths.csv");
        out << "t,path,i,x,y,z,psi\n";
        for (const auto& c : run.segments) {
            const std::pair<const char*, const PathSegment*> paths[] = {
                {"gvp", &c.gvp}, {"lvp", &c.lvp}, {"gvp_hat", &c.gvp_hat}};
            for (const auto& [name, path] : paths)
                for (std::size_t i = 0; i < path->size(); ++i) {
                    const auto& p = (*path)[i];
                    out << detail::fmt(c.t, 3) << ',' << name << ',' << i << ',' << detail::fmt(p.x) << ','
                        << detail::fmt(p.y) << ',' << detail::fmt(p.z) << ',' << detail::fmt(p.psi) << '\n';
                }
        }
    }
    {
        auto g = detail::open_out(dir / "plot_similarity.dat");
        auto d = detail::open_out(dir / "plot_distance.dat");
        auto u = detail::open_out(dir / "plot_utility.dat");
        auto r = detail::open_out(dir / "plot_rmse.dat");
        g << "# t gamma_s gamma_t replanned\n";
        d << "# t viewing_distance d_view\n";
        u << "# t utility\n";
        r << "# t rmse_pre rmse_post\n";
        for (const auto& c : run.log.cycles) {
            const std::string t = detail::fmt(c.t, 3);
            g << t << ' ' << detail::fmt(c.gamma_s) << ' ' << detail::fmt(sc.supervisor.gamma_t) << ' '
              << (c.mode == Mode::kReplanned ? 1 : 0) << '\n';
            d << t << ' ' << detail::fmt(c.viewing_distance) << ' ' << detail::fmt(sc.d_view()) << '\n';
            u << t << ' ' << detail::fmt(c.utility) << '\n';
            r << t << ' ' << detail::fmt(c.rmse_pre) << ' ' << detail::fmt(c.rmse_post) << '\n';
        }
    }
    detail::open_out(dir / "summary.json") << summary_json(sc, run, adaptive).dump(2) << '\n';
}

inline nlohmann::json compare_json(const Scenario& sc, const MissionRun& adaptive, const MissionRun& baseline) {
    auto side = [&](const MissionRun& r, bool a) { return summary_json(sc, r, a); };
    const auto& sa = adaptive.summary;
    const auto& sb = baseline.summary;
    return {{"scenario", sc.name},
            {"seed", sc.seed},
            {"adaptive", side(adaptive, true)},
            {"baseline", side(baseline, false)},
            {"utility_gain", std::isfinite(sa.mean_utility) && std::isfinite(sb.mean_utility)
                                 ? detail::nullable(sa.mean_utility - sb.mean_utility)
                                 : nlohmann::json()}};
}

}  // namespace adinsp

#endif  // ADINSP_APP_ARTIFACTS_HPP_

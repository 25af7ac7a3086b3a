// Command-line front end: plan | run | compare.

#include <cstdlib>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "adinsp/adinsp.hpp"

namespace {

constexpr int kExitCompleted = 0;
constexpr int kExitTimeout = 2;
constexpr int kExitAborted = 3;
constexpr int kExitUsage = 64;

struct Options {
    std::string config;
    std::string demo;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string mode;
};

adinsp::Scenario load(const Options& o) {
    adinsp::Scenario sc = o.demo.empty() ? adinsp::load_scenario(o.config) : adinsp::demo_scenario(o.demo);
    if (o.seed) sc.seed = *o.seed;
    if (o.mode == "adaptive") sc.adaptive = true;
    if (o.mode == "baseline") sc.adaptive = false;
    sc.validate();
    return sc;
}

int exit_code(adinsp::RunStatus s) {
    switch (s) {
        case adinsp::RunStatus::kCompleted: return kExitCompleted;
        case adinsp::RunStatus::kTimeout: return kExitTimeout;
        case adinsp::RunStatus::kAborted: return kExitAborted;
    }
    return kExitAborted;
}

void report(const char* label, const adinsp::MissionRun& run) {
    const auto& s = run.summary;
    spdlog::info("{}: {} after {:.1f} s, {} cycles, {:.1f}% replanned, mean utility {:.3f}", label,
                 adinsp::to_string(run.status), s.duration, s.cycles, s.replanned_percent, s.mean_utility);
}

int cmd_plan(const adinsp::Scenario& sc, const adinsp::fs::path& out) {
    const adinsp::PlanArtifacts plan = adinsp::plan_mission(sc);
    adinsp::write_plan(out / "plan", sc, plan);
    for (const auto& p : plan.plans)
        for (const auto& w : p.warnings) spdlog::warn("task {}: {}", p.task_id, w);
    if (!plan.any_reachable()) {
        spdlog::error("no task is reachable");
        return kExitAborted;
    }
    spdlog::info("planned {} task(s); first: {}", plan.task_sequence.size(), plan.order.front().task_id);
    return kExitCompleted;
}

int cmd_run(const adinsp::Scenario& sc, const adinsp::fs::path& out) {
    const adinsp::PlanArtifacts plan = adinsp::plan_mission(sc);
    adinsp::write_plan(out / "plan", sc, plan);
    const adinsp::MissionRun run = adinsp::run_mission(sc, plan, sc.adaptive);
    adinsp::write_run(out, sc, run, sc.adaptive);
    report(sc.adaptive ? "adaptive" : "baseline", run);
    return exit_code(run.status);
}

int cmd_compare(const adinsp::Scenario& sc, const adinsp::fs::path& out) {
    const adinsp::PlanArtifacts plan = adinsp::plan_mission(sc);
    adinsp::write_plan(out / "plan", sc, plan);
    const adinsp::MissionRun adaptive = adinsp::run_mission(sc, plan, true);
    const adinsp::MissionRun baseline = adinsp::run_mission(sc, plan, false);
    adinsp::write_run(out / "adaptive", sc, adaptive, true);
    adinsp::write_run(out / "baseline", sc, baseline, false);
    std::ofstream(out / "compare.json", std::ios::binary) << adinsp::compare_json(sc, adaptive, baseline).dump(2)
                                                           << '\n';
    report("adaptive", adaptive);
    report("baseline", baseline);
    return std::max(exit_code(adaptive.status), exit_code(baseline.status));
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* level = std::getenv("ADINSP_LOG_LEVEL")) spdlog::set_level(spdlog::level::from_str(level));

    CLI::App app{"Adaptive surface inspection planner and mission simulator"};
    app.require_subcommand(1);
    Options o;
    auto add_common = [&](CLI::App* sub) {
        auto* cfg = sub->add_option("--config", o.config, "scenario JSON file")->check(CLI::ExistingFile);
        auto* demo = sub->add_option("--demo", o.demo, "built-in scenario")
                         ->check(CLI::IsMember({"nominal", "receding", "obstacle"}));
        cfg->excludes(demo);
        sub->add_option("--out", o.out, "output directory")->required();
        sub->add_option("--seed", o.seed, "random seed (overrides the config)");
        sub->add_option("--mode", o.mode, "adaptive or baseline")->check(CLI::IsMember({"adaptive", "baseline"}));
    };
    CLI::App* plan = app.add_subcommand("plan", "generate view plans, tours and task order");
    CLI::App* run = app.add_subcommand("run", "plan and simulate one mission");
    CLI::App* compare = app.add_subcommand("compare", "simulate adaptive and baseline on the same plan");
    for (auto* sub : {plan, run, compare}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }
    if (o.config.empty() == o.demo.empty()) {
        spdlog::error("give exactly one of --config or --demo");
        return kExitUsage;
    }

    adinsp::Scenario sc;
    try {
        sc = load(o);
    } catch (const std::exception& e) {
        spdlog::error("invalid scenario: {}", e.what());
        return kExitUsage;
    }

    try {
        const adinsp::fs::path out(o.out);
        if (plan->parsed()) return cmd_plan(sc, out);
        if (run->parsed()) return cmd_run(sc, out);
        return cmd_compare(sc, out);
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kExitAborted;
    }
}

#ifndef ADINSP_APP_SCENARIO_HPP_
#define ADINSP_APP_SCENARIO_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adinsp/env/scene.hpp"
#include "adinsp/env/sensors.hpp"
#include "adinsp/global/route.hpp"
#include "adinsp/mission/controller.hpp"
#include "adinsp/mission/supervisor.hpp"

namespace adinsp {

inline constexpr int kSchemaVersion = 1;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// What the planner is allowed to know about the current map.
enum class MapKnowledge {
    kDiscovered,  // plan on the historical map; the current map is only seen through the sensor
    kPrebuilt,    // the current map is available before the mission
};

struct SimSettings {
    double dt{0.1};
    double max_time{600.0};
    double reach_tol{0.02};      // reference counts as reached within this distance...
    double reach_yaw_tol{0.02};  // ...and this heading error
    double ref_timeout{20.0};    // sim seconds spent on one reference before it counts as a failure
    double odom_sigma_xy{0.0};
    double odom_sigma_psi{0.0};
};

struct Scenario {
    std::string name;
    Scene scene;
    MapKnowledge knowledge{MapKnowledge::kDiscovered};
    std::vector<InspectionTask> tasks;
    Pose6 start;
    RobotState robot;  // limits and inflation; pose taken from `start`
    SupervisorConfig supervisor;
    RangeSensor sensor;
    CameraIntrinsics camera;
    HeightBand traversal{};
    SimSettings sim;
    std::uint64_t seed{1};
    bool adaptive{true};

    /// Map the planner uses before the mission starts.
    const VoxelMap& planning_map() const {
        return knowledge == MapKnowledge::kPrebuilt ? scene.current : scene.historical;
    }
    RouteOptions route_options() const { return RouteOptions{robot.inflation, traversal, 2.0}; }
    double d_view() const { return tasks.empty() ? ViewConstraints{}.d_view : tasks.front().constraints.d_view; }

    void validate() const {
        if (tasks.empty()) throw ConfigError("no tasks defined");
        std::set<std::string> ids;
        for (const auto& t : tasks) {
            if (t.id.empty()) throw ConfigError("task id must not be empty");
            if (!ids.insert(t.id).second) throw ConfigError("duplicate task id '" + t.id + "'");
            try {
                t.constraints.validate();
            } catch (const std::invalid_argument& e) {
                throw ConfigError("task '" + t.id + "': " + e.what());
            }
        }
        if (scene.historical.empty()) throw ConfigError("historical map is empty");
        if (!(sim.dt > 0.0) || !(sim.max_time > 0.0)) throw ConfigError("sim dt and max_time must be positive");
        if (!(sim.ref_timeout > 0.0)) throw ConfigError("ref_timeout must be positive");
        if (!(sim.odom_sigma_xy >= 0.0) || !(sim.odom_sigma_psi >= 0.0))
            throw ConfigError("odometry sigmas must be non-negative");
        if (!(sensor.range > 0.0) || sensor.ray_count < 1) throw ConfigError("sensor range and ray count must be positive");
        if (traversal.z_min > traversal.z_max) throw ConfigError("traversal band z_min > z_max");
        try {
            supervisor.validate();
            robot.validate();
            camera.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
};

// ---------------------------------------------------------------------------------------------
// JSON

namespace detail {

using nlohmann::json;

inline Vec3 vec3_from(const json& j, const std::string& what) {
    if (!j.is_array() || j.size() != 3) throw ConfigError(what + ": expected [x, y, z]");
    Vec3 v;
    for (int i = 0; i < 3; ++i) {
        if (!j[static_cast<std::size_t>(i)].is_number()) throw ConfigError(what + ": coordinates must be numbers");
        v[i] = j[static_cast<std::size_t>(i)].get<double>();
    }
    if (!v.allFinite()) throw ConfigError(what + ": coordinates must be finite");
    return v;
}

template <typename T>
T value_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(std::string("field '") + key + "' has the wrong type");
    }
}

inline AxisBox box_from(const json& j, const std::string& what) {
    if (!j.is_object() || !j.contains("min") || !j.contains("max")) throw ConfigError(what + ": expected {min, max}");
    AxisBox b{vec3_from(j["min"], what + ".min"), vec3_from(j["max"], what + ".max")};
    if ((b.min.array() > b.max.array()).any()) throw ConfigError(what + ": min exceeds max");
    return b;
}

inline void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) throw ConfigError("unknown field '" + k + "' in " + where);
}

/// Voxel keys whose centers lie inside any of the boxes.
inline std::vector<VoxelKey> box_keys(const std::vector<AxisBox>& boxes, double voxel_size, const Vec3& origin) {
    const VoxelMap frame(voxel_size, origin);
    std::vector<VoxelKey> keys;
    for (const auto& b : boxes) {
        const auto k = keys_in_box(frame, b);
        keys.insert(keys.end(), k.begin(), k.end());
    }
    return keys;
}

inline VoxelMap map_from(const json& j, const std::filesystem::path& base, double voxel_size, const Vec3& origin,
                         const std::string& what) {
    check_keys(j, {"files", "boxes"}, what);
    std::vector<VoxelKey> keys;
    const VoxelMap frame(voxel_size, origin);
    if (j.contains("files")) {
        for (const auto& f : j["files"]) {
            if (!f.is_string()) throw ConfigError(what + ".files: expected file names");
            const std::filesystem::path p = base / f.get<std::string>();
            if (!std::filesystem::exists(p)) throw ConfigError(what + ": map file not found: " + p.string());
            try {
                for (const auto& pt : read_xyz_file(p.string()).points) keys.push_back(frame.key_of(pt));
            } catch (const ParseError& e) {
                throw ConfigError(e.what());
            }
        }
    }
    if (j.contains("boxes")) {
        std::vector<AxisBox> boxes;
        for (std::size_t i = 0; i < j["boxes"].size(); ++i)
            boxes.push_back(box_from(j["boxes"][i], what + ".boxes[" + std::to_string(i) + "]"));
        const auto k = box_keys(boxes, voxel_size, origin);
        keys.insert(keys.end(), k.begin(), k.end());
    }
    return VoxelMap::from_keys(std::move(keys), voxel_size, origin);
}

inline HeightBand band_from(const json& j, const std::string& what) {
    HeightBand b{value_or(j, "z_min", 0.6), value_or(j, "z_max", 0.6)};
    if (b.z_min > b.z_max) throw ConfigError(what + ": z_min > z_max");
    return b;
}

}  // namespace detail

/// Parses a scenario document. Relative map paths resolve against `base_dir`.
inline Scenario parse_scenario(const nlohmann::json& j, const std::filesystem::path& base_dir = ".") {
    using detail::value_or;
    if (!j.is_object()) throw ConfigError("scenario must be a JSON object");
    detail::check_keys(j,
                       {"schema_version", "name", "voxel_size", "origin", "historical_map", "current_map", "delta",
                        "map_knowledge", "tasks", "robot", "planner", "sensor", "camera", "sim", "seed", "mode"},
                       "scenario");
    if (!j.contains("schema_version")) throw ConfigError("missing schema_version");
    if (value_or(j, "schema_version", 0) != kSchemaVersion)
        throw ConfigError("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");

    Scenario s;
    s.name = value_or<std::string>(j, "name", "scenario");
    const double vs = value_or(j, "voxel_size", VoxelMap::kDefaultVoxelSize);
    if (!(vs > 0.0)) throw ConfigError("voxel_size must be positive");
    const Vec3 origin = j.contains("origin") ? detail::vec3_from(j["origin"], "origin") : Vec3::Zero();

    if (!j.contains("historical_map")) throw ConfigError("missing historical_map");
    VoxelMap historical = detail::map_from(j["historical_map"], base_dir, vs, origin, "historical_map");
    if (j.contains("current_map") && j.contains("delta"))
        throw ConfigError("give either current_map or delta, not both");
    if (j.contains("current_map")) {
        s.scene = Scene::with_current(std::move(historical),
                                      detail::map_from(j["current_map"], base_dir, vs, origin, "current_map"));
    } else {
        MorphologyDelta delta;
        if (j.contains("delta")) {
            const auto& d = j["delta"];
            detail::check_keys(d, {"remove", "add"}, "delta");
            if (d.contains("remove"))
                for (std::size_t i = 0; i < d["remove"].size(); ++i)
                    delta.removal_boxes.push_back(detail::box_from(d["remove"][i], "delta.remove"));
            if (d.contains("add"))
                for (std::size_t i = 0; i < d["add"].size(); ++i)
                    delta.addition_boxes.push_back(detail::box_from(d["add"][i], "delta.add"));
        }
        s.scene = Scene::make(std::move(historical), std::move(delta));
    }

    const auto knowledge = value_or<std::string>(j, "map_knowledge", "discovered");
    if (knowledge == "discovered") s.knowledge = MapKnowledge::kDiscovered;
    else if (knowledge == "prebuilt") s.knowledge = MapKnowledge::kPrebuilt;
    else throw ConfigError("map_knowledge must be 'discovered' or 'prebuilt'");

    if (!j.contains("tasks") || !j["tasks"].is_array() || j["tasks"].empty()) throw ConfigError("no tasks defined");
    for (std::size_t i = 0; i < j["tasks"].size(); ++i) {
        const auto& t = j["tasks"][i];
        const std::string where = "tasks[" + std::to_string(i) + "]";
        detail::check_keys(t, {"id", "vertices", "d_view", "gamma_h", "gamma_v", "alpha_deg", "beta_deg", "side", "band"},
                           where);
        std::vector<Vec3> verts;
        if (!t.contains("vertices") || !t["vertices"].is_array()) throw ConfigError(where + ": missing vertices");
        for (const auto& v : t["vertices"]) verts.push_back(detail::vec3_from(v, where + ".vertices"));
        InspectionTask task;
        task.id = value_or<std::string>(t, "id", "task" + std::to_string(i));
        try {
            task.roi = PolygonROI(std::move(verts));
        } catch (const GeometryError& e) {
            throw ConfigError(where + ": invalid ROI: " + e.what());
        }
        ViewConstraints c;
        c.d_view = value_or(t, "d_view", c.d_view);
        c.gamma_h = value_or(t, "gamma_h", c.gamma_h);
        c.gamma_v = value_or(t, "gamma_v", c.gamma_v);
        c.alpha = deg2rad(value_or(t, "alpha_deg", 69.5));
        c.beta = deg2rad(value_or(t, "beta_deg", 45.0));
        task.constraints = c;
        const auto side = value_or<std::string>(t, "side", "auto");
        if (side == "auto") task.side = ViewSide::kAuto;
        else if (side == "normal") task.side = ViewSide::kNormal;
        else if (side == "opposite") task.side = ViewSide::kOpposite;
        else throw ConfigError(where + ": side must be auto, normal or opposite");
        if (t.contains("band")) task.band = detail::band_from(t["band"], where + ".band");
        s.tasks.push_back(std::move(task));
    }

    if (j.contains("robot")) {
        const auto& r = j["robot"];
        detail::check_keys(r, {"start", "yaw", "v_max", "w_max", "inflation", "band"}, "robot");
        if (r.contains("start")) {
            s.start = Pose6::from(detail::vec3_from(r["start"], "robot.start"), value_or(r, "yaw", 0.0));
        }
        s.robot.v_max = value_or(r, "v_max", s.robot.v_max);
        s.robot.w_max = value_or(r, "w_max", s.robot.w_max);
        s.robot.inflation = value_or(r, "inflation", s.robot.inflation);
        if (r.contains("band")) s.traversal = detail::band_from(r["band"], "robot.band");
    }
    s.robot.body_height = s.start.z;
    for (auto& task : s.tasks)
        if (!task.band) task.band = s.traversal;  // ground robot: viewpoints at body height unless overridden

    if (j.contains("planner")) {
        const auto& p = j["planner"];
        detail::check_keys(p, {"gamma_t", "horizon", "pos_tol", "yaw_tol", "max_retries", "lateral_deadband"}, "planner");
        s.supervisor.gamma_t = value_or(p, "gamma_t", s.supervisor.gamma_t);
        s.supervisor.horizon = value_or(p, "horizon", s.supervisor.horizon);
        s.supervisor.pos_tol = value_or(p, "pos_tol", s.supervisor.pos_tol);
        s.supervisor.yaw_tol = value_or(p, "yaw_tol", s.supervisor.yaw_tol);
        s.supervisor.max_retries = value_or(p, "max_retries", s.supervisor.max_retries);
        s.supervisor.local.lateral_deadband = value_or(p, "lateral_deadband", s.supervisor.pos_tol);
    } else {
        s.supervisor.local.lateral_deadband = s.supervisor.pos_tol;
    }
    s.supervisor.local.horizon = s.supervisor.horizon;
    s.supervisor.local.constraints = s.tasks.front().constraints;
    s.supervisor.local.band = s.traversal;

    if (j.contains("sensor")) {
        const auto& p = j["sensor"];
        detail::check_keys(p, {"range", "rays"}, "sensor");
        s.sensor.range = value_or(p, "range", s.sensor.range);
        s.sensor.ray_count = value_or(p, "rays", s.sensor.ray_count);
    }
    if (j.contains("camera")) {
        const auto& p = j["camera"];
        detail::check_keys(p, {"width", "height", "max_range"}, "camera");
        s.camera.width = value_or(p, "width", s.camera.width);
        s.camera.height = value_or(p, "height", s.camera.height);
        s.camera.max_range = value_or(p, "max_range", s.camera.max_range);
    }
    s.camera.alpha = s.tasks.front().constraints.alpha;
    s.camera.beta = s.tasks.front().constraints.beta;

    if (j.contains("sim")) {
        const auto& p = j["sim"];
        detail::check_keys(p, {"dt", "max_time", "reach_tol", "reach_yaw_tol", "ref_timeout", "odom_sigma_xy",
                               "odom_sigma_psi"},
                           "sim");
        s.sim.dt = value_or(p, "dt", s.sim.dt);
        s.sim.max_time = value_or(p, "max_time", s.sim.max_time);
        s.sim.reach_tol = value_or(p, "reach_tol", s.sim.reach_tol);
        s.sim.reach_yaw_tol = value_or(p, "reach_yaw_tol", s.sim.reach_yaw_tol);
        s.sim.ref_timeout = value_or(p, "ref_timeout", s.sim.ref_timeout);
        s.sim.odom_sigma_xy = value_or(p, "odom_sigma_xy", s.sim.odom_sigma_xy);
        s.sim.odom_sigma_psi = value_or(p, "odom_sigma_psi", s.sim.odom_sigma_psi);
    }
    s.seed = value_or<std::uint64_t>(j, "seed", s.seed);
    const auto mode = value_or<std::string>(j, "mode", "adaptive");
    if (mode == "adaptive") s.adaptive = true;
    else if (mode == "baseline") s.adaptive = false;
    else throw ConfigError("mode must be 'adaptive' or 'baseline'");

    s.validate();
    return s;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return parse_scenario(j, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

// ---------------------------------------------------------------------------------------------
// Built-in scenes

namespace detail {

inline Scenario demo_base(std::string name) {
    Scenario s;
    s.name = std::move(name);
    s.supervisor.local.band = s.traversal;
    s.supervisor.local.lateral_deadband = s.supervisor.pos_tol;
    s.robot.body_height = 0.6;
    return s;
}

inline InspectionTask wall_task(std::string id, double x, double y0, double y1, double z0, double z1) {
    InspectionTask t;
    t.id = std::move(id);
    t.roi = PolygonROI({{x, y0, z0}, {x, y1, z0}, {x, y1, z1}, {x, y0, z1}});
    t.band = HeightBand{};
    return t;
}

}  // namespace detail

/// Flat 6 x 2 m wall, unchanged since the historical map was built.
inline Scenario demo_nominal() {
    Scenario s = detail::demo_base("nominal");
    const std::vector<AxisBox> wall{{{4.0, 0.0, 0.0}, {4.4, 6.0, 2.0}}};
    s.scene = Scene::make(VoxelMap::from_keys(detail::box_keys(wall, 0.1, Vec3::Zero())), {});
    s.tasks.push_back(detail::wall_task("wall", 4.0, 0.0, 6.0, 0.0, 2.0));
    s.start = Pose6::from({1.8, -0.3, 0.6}, 0.0);
    s.sim.max_time = 120.0;
    return s;
}

/// Face that has receded since mapping: 1 m over most of its length, 0.7 m near the far end. The
/// exposed back face is rough (shallow seeded pits).
inline Scenario demo_receding(std::uint64_t texture_seed = 7) {
    Scenario s = detail::demo_base("receding");
    const std::vector<AxisBox> solid{
        {{5.0, -4.0, 0.0}, {5.4, 16.0, 2.0}},  // back wall
        {{4.0, -2.0, 0.0}, {5.0, 12.0, 2.0}},  // material in front of it, mapped earlier
    };
    const double vs = 0.1;
    s.scene.historical = VoxelMap::from_keys(detail::box_keys(solid, vs, Vec3::Zero()));
    MorphologyDelta delta;
    delta.removal_boxes.push_back({{4.0, -2.0, 0.0}, {5.0, 7.5, 2.0}});
    delta.removal_boxes.push_back({{4.0, 7.5, 0.0}, {4.7, 12.0, 2.0}});
    std::mt19937_64 rng(texture_seed);
    std::bernoulli_distribution pit(0.35);
    for (double y = -2.0; y < 7.5 - 1e-9; y += 0.3)
        for (double z = 0.0; z < 2.0 - 1e-9; z += 0.3)
            if (pit(rng)) delta.removal_boxes.push_back({{5.0, y, z}, {5.1, y + 0.3, z + 0.3}});
    s.scene = Scene::make(std::move(s.scene.historical), std::move(delta));
    s.tasks.push_back(detail::wall_task("face", 4.0, 0.0, 10.0, 0.0, 2.0));
    s.start = Pose6::from({1.5, -0.8, 0.6}, 0.0);
    s.sim.max_time = 240.0;
    return s;
}

/// Flat wall with a pillar that appeared in front of one section; the current map is known up front.
inline Scenario demo_obstacle() {
    Scenario s = detail::demo_base("obstacle");
    const std::vector<AxisBox> wall{{{4.0, 0.0, 0.0}, {4.4, 6.0, 2.0}}};
    MorphologyDelta delta;
    delta.addition_boxes.push_back({{2.4, 2.9, 0.0}, {2.8, 3.5, 1.5}});
    s.scene = Scene::make(VoxelMap::from_keys(detail::box_keys(wall, 0.1, Vec3::Zero())), std::move(delta));
    s.knowledge = MapKnowledge::kPrebuilt;
    s.tasks.push_back(detail::wall_task("wall", 4.0, 0.0, 6.0, 0.0, 2.0));
    s.start = Pose6::from({1.8, -0.3, 0.6}, 0.0);
    s.sim.max_time = 180.0;
    return s;
}

inline Scenario demo_scenario(const std::string& name) {
    if (name == "nominal") return demo_nominal();
    if (name == "receding") return demo_receding();
    if (name == "obstacle") return demo_obstacle();
    throw ConfigError("unknown demo '" + name + "' (nominal, receding, obstacle)");
}

}  // namespace adinsp

#endif  // ADINSP_APP_SCENARIO_HPP_

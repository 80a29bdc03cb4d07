#include "follow/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

namespace follow {

using nlohmann::json;

namespace {

ScenarioConfig base_defaults() {
  ScenarioConfig c;
  c.controller.gains.lambda1 = c.body.lambda1();
  c.controller.gains.lambda2 = c.body.lambda2();
  return c;
}

ScenarioConfig circle_sim() {
  ScenarioConfig c = base_defaults();
  c.trajectory.kind = TrajectoryKind::kCircle;
  c.trajectory.center = {0.5, 0.5};
  c.trajectory.radius = 0.4;
  c.trajectory.rate = 1.0;
  c.controller.gains.desired_half_height = 100.0;
  c.initial.robot = {0.0, 0.0, 0.0};
  c.initial.aim_at_target = true;
  c.duration = 60.0;
  return c;
}

// Real-robot style presets: only the control-side configuration is meaningful.
ScenarioConfig indoor() {
  ScenarioConfig c = base_defaults();
  c.intrinsics = {1000.0, 1000.0, 960.0, 540.0, 1920, 1080};
  c.controller.gains.desired_half_height = 500.0;
  c.controller.gains.lambda1 = 5.0;
  c.controller.gains.lambda2 = 0.91;
  c.trajectory.kind = TrajectoryKind::kWaypoints;
  c.trajectory.waypoints = {{1.8, 0.0}, {5.0, 0.0}, {7.0, 1.0}, {10.0, 1.0}};
  c.trajectory.speed = 0.35;
  c.perception.noise.sigma_px = 1.0;
  c.perception.noise.occlusion_windows = {{15.0, 16.5}};
  c.initial.aim_at_target = true;
  c.duration = 40.0;
  return c;
}

ScenarioConfig outdoor() {
  ScenarioConfig c = indoor();
  c.controller.gains.desired_half_height = 300.0;
  c.trajectory.waypoints = {{3.0, 0.0}, {10.0, 0.0}, {14.0, 1.5}, {22.0, 1.5}};
  c.trajectory.speed = 0.6;
  c.perception.noise.sigma_px = 2.0;
  c.perception.noise.occlusion_windows = {{20.0, 22.0}};
  c.duration = 40.0;
  return c;
}

std::string join(const std::string& path, std::string_view key) {
  return path + "/" + std::string(key);
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(path + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) throw ConfigError(join(path, key) + ": unknown key");
  }
}

void read(const json& j, const std::string& path, std::string_view key, double& out) {
  const auto it = j.find(std::string(key));
  if (it == j.end()) return;
  if (!it->is_number()) throw ConfigError(join(path, key) + ": expected a number");
  out = it->get<double>();
}

void read(const json& j, const std::string& path, std::string_view key, int& out) {
  const auto it = j.find(std::string(key));
  if (it == j.end()) return;
  if (!it->is_number_integer()) throw ConfigError(join(path, key) + ": expected an integer");
  out = it->get<int>();
}

void read(const json& j, const std::string& path, std::string_view key, bool& out) {
  const auto it = j.find(std::string(key));
  if (it == j.end()) return;
  if (!it->is_boolean()) throw ConfigError(join(path, key) + ": expected true or false");
  out = it->get<bool>();
}

void read(const json& j, const std::string& path, std::string_view key, std::uint64_t& out) {
  const auto it = j.find(std::string(key));
  if (it == j.end()) return;
  if (!it->is_number_unsigned()) throw ConfigError(join(path, key) + ": expected a non-negative integer");
  out = it->get<std::uint64_t>();
}

Point2 to_point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(path + ": expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

void read(const json& j, const std::string& path, std::string_view key, Point2& out) {
  const auto it = j.find(std::string(key));
  if (it == j.end()) return;
  out = to_point(*it, join(path, key));
}

const json* section(const json& root, std::string_view key) {
  const auto it = root.find(std::string(key));
  return it == root.end() ? nullptr : &*it;
}

void apply_overrides(const json& root, ScenarioConfig& c) {
  reject_unknown(root, "", {"preset", "intrinsics", "joint_limits", "body", "gains", "saturation", "controller",
                            "trajectory", "noise", "recovery", "gate", "initial", "dt", "duration", "seed"});

  if (const json* s = section(root, "intrinsics")) {
    const std::string p = "/intrinsics";
    reject_unknown(*s, p, {"alpha_x", "alpha_y", "u0", "v0", "width", "height"});
    read(*s, p, "alpha_x", c.intrinsics.alpha_x);
    read(*s, p, "alpha_y", c.intrinsics.alpha_y);
    read(*s, p, "u0", c.intrinsics.u0);
    read(*s, p, "v0", c.intrinsics.v0);
    read(*s, p, "width", c.intrinsics.width);
    read(*s, p, "height", c.intrinsics.height);
  }
  if (const json* s = section(root, "joint_limits")) {
    const std::string p = "/joint_limits";
    reject_unknown(*s, p, {"alpha_max", "beta_max"});
    read(*s, p, "alpha_max", c.joint_limits.alpha_max);
    read(*s, p, "beta_max", c.joint_limits.beta_max);
  }
  if (const json* s = section(root, "body")) {
    const std::string p = "/body";
    reject_unknown(*s, p, {"camera_height", "body_center_height", "head_height"});
    read(*s, p, "camera_height", c.body.camera_height);
    read(*s, p, "body_center_height", c.body.body_center_height);
    read(*s, p, "head_height", c.body.head_height);
  }
  if (const json* s = section(root, "gains")) {
    const std::string p = "/gains";
    reject_unknown(*s, p, {"k1", "k2", "k3", "H", "lambda1", "lambda2"});
    auto& g = c.controller.gains;
    read(*s, p, "k1", g.k1);
    read(*s, p, "k2", g.k2);
    read(*s, p, "k3", g.k3);
    read(*s, p, "H", g.desired_half_height);
    read(*s, p, "lambda1", g.lambda1);
    read(*s, p, "lambda2", g.lambda2);
  }
  if (const json* s = section(root, "saturation")) {
    const std::string p = "/saturation";
    reject_unknown(*s, p, {"v_max", "omega_pan_max", "omega_tilt_max", "omega_robot_max"});
    auto& l = c.controller.limits;
    read(*s, p, "v_max", l.v_max);
    read(*s, p, "omega_pan_max", l.omega_pan_max);
    read(*s, p, "omega_tilt_max", l.omega_tilt_max);
    read(*s, p, "omega_robot_max", l.omega_robot_max);
  }
  if (const json* s = section(root, "controller")) {
    const std::string p = "/controller";
    reject_unknown(*s, p, {"mode", "hold_decay"});
    if (const json* m = section(*s, "mode")) {
      if (!m->is_string()) throw ConfigError(p + "/mode: expected a string");
      try {
        c.controller.mode = parse_jacobian_mode(m->get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw ConfigError(p + "/mode: " + e.what());
      }
    }
    read(*s, p, "hold_decay", c.controller.hold_decay);
  }
  if (const json* s = section(root, "trajectory")) {
    const std::string p = "/trajectory";
    reject_unknown(*s, p, {"kind", "center", "radius", "rate", "start", "velocity", "waypoints", "speed", "phase"});
    auto& t = c.trajectory;
    if (const json* k = section(*s, "kind")) {
      const std::string kind = k->is_string() ? k->get<std::string>() : "";
      if (kind == "circle") t.kind = TrajectoryKind::kCircle;
      else if (kind == "line") t.kind = TrajectoryKind::kLine;
      else if (kind == "waypoints") t.kind = TrajectoryKind::kWaypoints;
      else throw ConfigError(p + "/kind: expected \"circle\", \"line\" or \"waypoints\"");
    }
    read(*s, p, "center", t.center);
    read(*s, p, "radius", t.radius);
    read(*s, p, "rate", t.rate);
    read(*s, p, "start", t.start);
    read(*s, p, "velocity", t.velocity);
    if (const json* w = section(*s, "waypoints")) {
      if (!w->is_array()) throw ConfigError(p + "/waypoints: expected an array of [x, y]");
      t.waypoints.clear();
      for (std::size_t i = 0; i < w->size(); ++i)
        t.waypoints.push_back(to_point((*w)[i], p + "/waypoints/" + std::to_string(i)));
    }
    read(*s, p, "speed", t.speed);
    read(*s, p, "phase", t.phase);
  }
  if (const json* s = section(root, "noise")) {
    const std::string p = "/noise";
    reject_unknown(*s, p, {"sigma_px", "occlusion_windows", "dropout_prob", "score_visible", "score_occluded"});
    auto& n = c.perception.noise;
    read(*s, p, "sigma_px", n.sigma_px);
    if (const json* w = section(*s, "occlusion_windows")) {
      if (!w->is_array()) throw ConfigError(p + "/occlusion_windows: expected an array of [t_start, t_end]");
      n.occlusion_windows.clear();
      for (std::size_t i = 0; i < w->size(); ++i) {
        const Point2 span = to_point((*w)[i], p + "/occlusion_windows/" + std::to_string(i));
        n.occlusion_windows.push_back({span.x, span.y});
      }
    }
    read(*s, p, "dropout_prob", n.dropout_prob);
    read(*s, p, "score_visible", n.score_visible);
    read(*s, p, "score_occluded", n.score_occluded);
  }
  if (const json* s = section(root, "recovery")) {
    const std::string p = "/recovery";
    reject_unknown(*s, p, {"th_low", "th_high", "step_s", "search_radius_px"});
    auto& r = c.perception.recovery;
    read(*s, p, "th_low", r.th_low);
    read(*s, p, "th_high", r.th_high);
    read(*s, p, "step_s", r.step_s);
    read(*s, p, "search_radius_px", r.search_radius_px);
  }
  if (const json* s = section(root, "gate")) {
    const std::string p = "/gate";
    reject_unknown(*s, p, {"pixel_tolerance"});
    read(*s, p, "pixel_tolerance", c.perception.gate_tolerance_px);
  }
  if (const json* s = section(root, "initial")) {
    const std::string p = "/initial";
    reject_unknown(*s, p, {"x", "y", "theta", "alpha", "beta", "aim_at_target"});
    read(*s, p, "x", c.initial.robot.x);
    read(*s, p, "y", c.initial.robot.y);
    read(*s, p, "theta", c.initial.robot.theta);
    read(*s, p, "alpha", c.initial.angles.alpha);
    read(*s, p, "beta", c.initial.angles.beta);
    read(*s, p, "aim_at_target", c.initial.aim_at_target);
  }
  read(root, "", "dt", c.dt);
  read(root, "", "duration", c.duration);
  read(root, "", "seed", c.seed);
}

}  // namespace

std::vector<std::string> preset_names() { return {"circle-sim", "indoor", "outdoor"}; }

ScenarioConfig preset(std::string_view name) {
  if (name == "circle-sim") return circle_sim();
  if (name == "indoor") return indoor();
  if (name == "outdoor") return outdoor();
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

ScenarioConfig parse_config_text(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("top level must be an object");

  ScenarioConfig c = base_defaults();
  if (const json* p = section(root, "preset")) {
    if (!p->is_string()) throw ConfigError("/preset: expected a string");
    c = preset(p->get<std::string>());
  }
  apply_overrides(root, c);
  try {
    c.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

ScenarioConfig load_scenario(std::string_view preset_or_path) {
  for (const auto& name : preset_names())
    if (name == preset_or_path) return preset(name);
  return parse_config(std::filesystem::path(std::string(preset_or_path)));
}

}  // namespace follow

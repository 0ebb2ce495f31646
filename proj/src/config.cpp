#include "bplat/config.hpp"

#include <fstream>
#include <set>

namespace bplat {

namespace {

using nlohmann::json;

void expect_keys(const json& j, const std::set<std::string>& allowed,
                 const std::string& path) {
  if (!j.is_object())
    throw ConfigError("expected an object at " + path, path);
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!allowed.count(key))
      throw ConfigError("unknown key '" + key + "' at " + path,
                        path + "." + key);
  }
}

double get_num(const json& j, const std::string& key, double fallback,
               const std::string& path) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ConfigError("expected a number", path + "." + key);
  return j.at(key).get<double>();
}

Matrix3d parse_inertia(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>() * Matrix3d::Identity();
  if (j.is_array() && j.size() == 3 && j.at(0).is_number()) {
    return Eigen::Vector3d(j.at(0).get<double>(), j.at(1).get<double>(),
                           j.at(2).get<double>())
        .asDiagonal();
  }
  if (j.is_array() && j.size() == 3 && j.at(0).is_array()) {
    Matrix3d I;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        I(r, c) = j.at(static_cast<size_t>(r)).at(static_cast<size_t>(c)).get<double>();
    return I;
  }
  throw ConfigError("inertia must be a scalar, [3] diagonal, or [3][3]", path);
}

void parse_geometry(const json& j, PlatformGeometry& g,
                    const std::string& path) {
  expect_keys(j,
              {"base_radius_m", "platform_radius_m", "mount_angle_deg",
               "stroke_m", "min_length_m", "joint_limit_deg"},
              path);
  g.base_radius = get_num(j, "base_radius_m", g.base_radius, path);
  g.platform_radius = get_num(j, "platform_radius_m", g.platform_radius, path);
  g.mount_angle =
      deg2rad(get_num(j, "mount_angle_deg", rad2deg(g.mount_angle), path));
  g.stroke_max = get_num(j, "stroke_m", g.stroke_max, path);
  g.actuator_min_length = get_num(j, "min_length_m", g.actuator_min_length, path);
  g.joint_limit =
      deg2rad(get_num(j, "joint_limit_deg", rad2deg(g.joint_limit), path));
  g.validate();
}

ActuatorParams parse_actuator(const json& j, const std::string& path) {
  expect_keys(j, {"m1", "c1", "m2", "c2", "I1", "I2"}, path);
  ActuatorParams a;
  a.piston_mass = get_num(j, "m1", a.piston_mass, path);
  a.piston_half_length = get_num(j, "c1", a.piston_half_length, path);
  a.stroke_mass = get_num(j, "m2", a.stroke_mass, path);
  a.stroke_half_length = get_num(j, "c2", a.stroke_half_length, path);
  if (j.contains("I1")) a.piston_inertia = parse_inertia(j.at("I1"), path + ".I1");
  if (j.contains("I2")) a.stroke_inertia = parse_inertia(j.at("I2"), path + ".I2");
  a.validate();
  return a;
}

void parse_dynamics(const json& j, SystemModel& model, const std::string& path) {
  expect_keys(j, {"platform", "actuators", "coriolis_model"}, path);
  if (j.contains("platform")) {
    const json& p = j.at("platform");
    expect_keys(p, {"mass_kg", "inertia", "gravity_mps2"}, path + ".platform");
    model.body.mass = get_num(p, "mass_kg", model.body.mass, path + ".platform");
    if (p.contains("inertia"))
      model.body.inertia =
          parse_inertia(p.at("inertia"), path + ".platform.inertia");
    if (p.contains("gravity_mps2"))
      model.body.gravity =
          Vector3d(0.0, 0.0, -std::abs(p.at("gravity_mps2").get<double>()));
    model.body.validate();
  }
  if (j.contains("actuators")) {
    const json& a = j.at("actuators");
    if (a.is_object()) {
      model.actuators.fill(parse_actuator(a, path + ".actuators"));
    } else if (a.is_array() && a.size() == 3) {
      for (int i = 0; i < 3; ++i)
        model.actuators[static_cast<size_t>(i)] = parse_actuator(
            a.at(static_cast<size_t>(i)),
            path + ".actuators[" + std::to_string(i) + "]");
    } else {
      throw ConfigError("actuators must be one object or an array of 3",
                        path + ".actuators");
    }
  }
  if (j.contains("coriolis_model")) {
    const std::string name = j.at("coriolis_model").get<std::string>();
    if (name == "consistent")
      model.coriolis = CoriolisModel::kConsistent;
    else if (name == "simplified")
      model.coriolis = CoriolisModel::kStaticJacobian;
    else
      throw ConfigError("coriolis_model must be 'consistent' or 'simplified'",
                        path + ".coriolis_model");
  }
}

ChannelSpec parse_angle_channel(const json& j, const ChannelSpec& fallback,
                                const std::string& path) {
  expect_keys(j, {"offset_deg", "amplitude_deg", "frequency_hz", "phase_deg"},
              path);
  ChannelSpec c = fallback;
  c.offset = deg2rad(get_num(j, "offset_deg", rad2deg(c.offset), path));
  c.amplitude = deg2rad(get_num(j, "amplitude_deg", rad2deg(c.amplitude), path));
  c.frequency = get_num(j, "frequency_hz", c.frequency, path);
  c.phase = deg2rad(get_num(j, "phase_deg", rad2deg(c.phase), path));
  return c;
}

ChannelSpec parse_length_channel(const json& j, const ChannelSpec& fallback,
                                 const std::string& path) {
  expect_keys(j, {"offset_m", "amplitude_m", "frequency_hz", "phase_deg"},
              path);
  ChannelSpec c = fallback;
  c.offset = get_num(j, "offset_m", c.offset, path);
  c.amplitude = get_num(j, "amplitude_m", c.amplitude, path);
  c.frequency = get_num(j, "frequency_hz", c.frequency, path);
  c.phase = deg2rad(get_num(j, "phase_deg", rad2deg(c.phase), path));
  return c;
}

ReferenceKind parse_kind(const json& j, const std::string& path) {
  const std::string name = j.get<std::string>();
  if (name == "step") return ReferenceKind::kStep;
  if (name == "sine") return ReferenceKind::kSine;
  if (name == "composite") return ReferenceKind::kComposite;
  throw ConfigError("kind must be 'step', 'sine', or 'composite'", path);
}

void parse_simulation(const json& j, SimulationConfig& sim,
                      const std::string& path) {
  expect_keys(j,
              {"reference", "dt", "duration", "duration_s", "mode", "mismatch",
               "feedback", "min_tilt_deg"},
              path);
  if (j.contains("reference")) {
    const json& r = j.at("reference");
    expect_keys(r, {"kind", "alpha", "beta", "z", "step_time_s", "ramp_s"},
                path + ".reference");
    if (r.contains("kind"))
      sim.reference.kind = parse_kind(r.at("kind"), path + ".reference.kind");
    if (r.contains("alpha"))
      sim.reference.alpha = parse_angle_channel(r.at("alpha"),
                                                sim.reference.alpha,
                                                path + ".reference.alpha");
    if (r.contains("beta"))
      sim.reference.beta = parse_angle_channel(r.at("beta"),
                                               sim.reference.beta,
                                               path + ".reference.beta");
    if (r.contains("z"))
      sim.reference.z = parse_length_channel(r.at("z"), sim.reference.z,
                                             path + ".reference.z");
    sim.reference.step_time =
        get_num(r, "step_time_s", sim.reference.step_time, path + ".reference");
    sim.reference.ramp =
        get_num(r, "ramp_s", sim.reference.ramp, path + ".reference");
  }
  sim.reference.sample_dt = get_num(j, "dt", sim.reference.sample_dt, path);
  sim.reference.duration = get_num(j, "duration", sim.reference.duration, path);
  sim.reference.duration = get_num(j, "duration_s", sim.reference.duration, path);
  if (j.contains("mode")) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "consistency")
      sim.mode = SimulationMode::kConsistency;
    else if (mode == "mismatch")
      sim.mode = SimulationMode::kMismatch;
    else
      throw ConfigError("mode must be 'consistency' or 'mismatch'",
                        path + ".mode");
  }
  if (j.contains("mismatch")) {
    const json& m = j.at("mismatch");
    expect_keys(m, {"platform_mass_scale", "leg_mass_scale"}, path + ".mismatch");
    sim.mismatch.platform_mass_scale =
        get_num(m, "platform_mass_scale", 1.0, path + ".mismatch");
    sim.mismatch.leg_mass_scale =
        get_num(m, "leg_mass_scale", 1.0, path + ".mismatch");
  }
  if (j.contains("feedback")) {
    const json& f = j.at("feedback");
    expect_keys(f, {"kp", "kd"}, path + ".feedback");
    auto parse_gain = [&](const char* key, Vector3d& out) {
      if (!f.contains(key)) return;
      const json& g = f.at(key);
      if (g.is_number()) {
        out.setConstant(g.get<double>());
      } else if (g.is_array() && g.size() == 3) {
        for (int i = 0; i < 3; ++i) out[i] = g.at(static_cast<size_t>(i)).get<double>();
      } else {
        throw ConfigError("feedback gain must be a number or [3]",
                          path + ".feedback." + key);
      }
    };
    parse_gain("kp", sim.feedback_kp);
    parse_gain("kd", sim.feedback_kd);
  }
  sim.min_tilt = deg2rad(get_num(j, "min_tilt_deg", rad2deg(sim.min_tilt), path));
}

PidGains parse_gains(const json& j, const std::string& path) {
  expect_keys(j, {"kp", "ki", "kd", "output_limit_n", "integral_limit_n"}, path);
  PidGains g;
  g.kp = get_num(j, "kp", g.kp, path);
  g.ki = get_num(j, "ki", g.ki, path);
  g.kd = get_num(j, "kd", g.kd, path);
  g.output_limit = get_num(j, "output_limit_n", g.output_limit, path);
  g.integral_limit = get_num(j, "integral_limit_n", g.integral_limit, path);
  g.validate();
  return g;
}

MotorPlant parse_plant(const json& j, const std::string& path) {
  expect_keys(j,
              {"mass_kg", "viscous_nspm", "coulomb_n", "gravity_n",
               "noise_sigma_m", "latency_s"},
              path);
  MotorPlant p;
  p.mass = get_num(j, "mass_kg", p.mass, path);
  p.viscous = get_num(j, "viscous_nspm", p.viscous, path);
  p.coulomb = get_num(j, "coulomb_n", p.coulomb, path);
  p.gravity_load = get_num(j, "gravity_n", p.gravity_load, path);
  p.noise_sigma = get_num(j, "noise_sigma_m", p.noise_sigma, path);
  p.latency = get_num(j, "latency_s", p.latency, path);
  p.validate();
  return p;
}

void parse_control(const json& j, ControlScenario& ctl, const std::string& path) {
  expect_keys(j, {"reference", "loop_rate_hz", "gains", "plants", "tune"},
              path);
  if (j.contains("reference")) {
    const json& r = j.at("reference");
    expect_keys(r,
                {"kind", "amplitude_m", "frequency_hz", "step_time_s",
                 "ramp_s", "duration_s"},
                path + ".reference");
    if (r.contains("kind")) {
      const ReferenceKind kind = parse_kind(r.at("kind"), path + ".reference.kind");
      if (kind == ReferenceKind::kComposite)
        throw ConfigError("control reference must be 'step' or 'sine'",
                          path + ".reference.kind");
      ctl.reference.kind = kind;
    }
    ctl.reference.amplitude =
        get_num(r, "amplitude_m", ctl.reference.amplitude, path);
    ctl.reference.frequency =
        get_num(r, "frequency_hz", ctl.reference.frequency, path);
    ctl.reference.step_time =
        get_num(r, "step_time_s", ctl.reference.step_time, path);
    ctl.reference.ramp = get_num(r, "ramp_s", ctl.reference.ramp, path);
    ctl.reference.duration =
        get_num(r, "duration_s", ctl.reference.duration, path);
  }
  ctl.reference.loop_rate = get_num(j, "loop_rate_hz", ctl.reference.loop_rate, path);
  auto parse_triple = [&](const char* key, auto parser, auto& out) {
    if (!j.contains(key)) return;
    const json& arr = j.at(key);
    if (arr.is_object()) {
      out.fill(parser(arr, path + "." + key));
    } else if (arr.is_array() && arr.size() == 3) {
      for (int i = 0; i < 3; ++i)
        out[static_cast<size_t>(i)] =
            parser(arr.at(static_cast<size_t>(i)),
                   path + "." + key + "[" + std::to_string(i) + "]");
    } else {
      throw ConfigError(std::string(key) + " must be one object or an array of 3",
                        path + "." + key);
    }
  };
  parse_triple("gains", parse_gains, ctl.gains);
  parse_triple("plants", parse_plant, ctl.plants);
  if (j.contains("tune")) {
    const json& t = j.at("tune");
    expect_keys(t, {"enabled", "budget"}, path + ".tune");
    if (t.contains("enabled")) ctl.tune = t.at("enabled").get<bool>();
    ctl.tune_budget =
        static_cast<int>(get_num(t, "budget", ctl.tune_budget, path + ".tune"));
  }
}

void parse_posture(const json& j, PostureScenario& post, const std::string& path) {
  expect_keys(j,
              {"mode", "case", "total_mass_kg", "duration_s", "rate_hz",
               "hold_time_s", "noise_scale", "layout", "lower_radius_m",
               "input_csv", "stimuli_s", "threshold", "cop"},
              path);
  if (j.contains("mode")) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "synthesize")
      post.mode = PostureScenario::Mode::kSynthesize;
    else if (mode == "analyze")
      post.mode = PostureScenario::Mode::kAnalyze;
    else
      throw ConfigError("mode must be 'synthesize' or 'analyze'", path + ".mode");
  }
  if (j.contains("case")) {
    const auto parsed = parse_load_case(j.at("case").get<std::string>());
    if (!parsed)
      throw ConfigError("unknown load case '" +
                            j.at("case").get<std::string>() + "'",
                        path + ".case");
    post.synthesis.load_case = *parsed;
  }
  post.synthesis.total_mass =
      get_num(j, "total_mass_kg", post.synthesis.total_mass, path);
  post.synthesis.duration = get_num(j, "duration_s", post.synthesis.duration, path);
  post.synthesis.rate_hz = get_num(j, "rate_hz", post.synthesis.rate_hz, path);
  post.synthesis.hold_time =
      get_num(j, "hold_time_s", post.synthesis.hold_time, path);
  post.synthesis.noise_scale =
      get_num(j, "noise_scale", post.synthesis.noise_scale, path);
  if (j.contains("layout")) {
    const json& l = j.at("layout");
    expect_keys(l,
                {"foot_length_m", "rail_min_m", "rail_max_m", "toes_fraction",
                 "metatarsals_fraction", "midfoot_fraction", "areas_cm2"},
                path + ".layout");
    post.layout.foot_length =
        get_num(l, "foot_length_m", post.layout.foot_length, path);
    post.layout.rail_min = get_num(l, "rail_min_m", post.layout.rail_min, path);
    post.layout.rail_max = get_num(l, "rail_max_m", post.layout.rail_max, path);
    post.layout.toes_fraction =
        get_num(l, "toes_fraction", post.layout.toes_fraction, path);
    post.layout.metatarsals_fraction = get_num(
        l, "metatarsals_fraction", post.layout.metatarsals_fraction, path);
    post.layout.midfoot_fraction =
        get_num(l, "midfoot_fraction", post.layout.midfoot_fraction, path);
    if (l.contains("areas_cm2")) {
      const json& a = l.at("areas_cm2");
      expect_keys(a, {"toes", "metatarsals", "midfoot", "heel"},
                  path + ".layout.areas_cm2");
      post.layout.areas.toes = get_num(a, "toes", post.layout.areas.toes, path);
      post.layout.areas.metatarsals =
          get_num(a, "metatarsals", post.layout.areas.metatarsals, path);
      post.layout.areas.midfoot =
          get_num(a, "midfoot", post.layout.areas.midfoot, path);
      post.layout.areas.heel = get_num(a, "heel", post.layout.areas.heel, path);
    }
    post.layout.validate();
  }
  post.lower_radius = get_num(j, "lower_radius_m", post.lower_radius, path);
  if (j.contains("input_csv")) post.input_csv = j.at("input_csv").get<std::string>();
  if (j.contains("stimuli_s")) {
    for (const auto& v : j.at("stimuli_s"))
      post.stimuli.push_back(v.get<double>());
  }
  if (j.contains("threshold")) {
    const json& t = j.at("threshold");
    expect_keys(t,
                {"k_sigma", "min_threshold_n", "baseline_window_s",
                 "response_window_s"},
                path + ".threshold");
    post.threshold.k_sigma = get_num(t, "k_sigma", post.threshold.k_sigma, path);
    post.threshold.min_threshold =
        get_num(t, "min_threshold_n", post.threshold.min_threshold, path);
    post.threshold.baseline_window =
        get_num(t, "baseline_window_s", post.threshold.baseline_window, path);
    post.threshold.response_window =
        get_num(t, "response_window_s", post.threshold.response_window, path);
  }
  if (j.contains("cop")) {
    const json& c = j.at("cop");
    expect_keys(c, {"moment_x_nm", "force_y_n", "force_z_n", "height_m"},
                path + ".cop");
    post.has_cop = true;
    post.cop_moment_x = get_num(c, "moment_x_nm", 0.0, path + ".cop");
    post.cop_force_y = get_num(c, "force_y_n", 0.0, path + ".cop");
    post.cop_force_z = get_num(c, "force_z_n", 0.0, path + ".cop");
    post.cop_height = get_num(c, "height_m", 0.03, path + ".cop");
  }
}

}  // namespace

AppConfig parse_config(const json& root) {
  AppConfig cfg;
  expect_keys(root,
              {"seed", "geometry", "dynamics", "simulation", "control",
               "posture"},
              "config");
  if (root.contains("seed")) {
    if (!root.at("seed").is_number_unsigned())
      throw ConfigError("seed must be a non-negative integer", "config.seed");
    cfg.seed = root.at("seed").get<uint64_t>();
  }
  if (root.contains("geometry"))
    parse_geometry(root.at("geometry"), cfg.geometry, "config.geometry");
  cfg.model.geometry = cfg.geometry;
  cfg.model.actuators = {ActuatorParams{}, ActuatorParams{}, ActuatorParams{}};
  if (root.contains("dynamics"))
    parse_dynamics(root.at("dynamics"), cfg.model, "config.dynamics");
  if (root.contains("simulation"))
    parse_simulation(root.at("simulation"), cfg.simulation, "config.simulation");
  if (root.contains("control"))
    parse_control(root.at("control"), cfg.control, "config.control");
  if (root.contains("posture"))
    parse_posture(root.at("posture"), cfg.posture, "config.posture");
  cfg.control.reference.seed = cfg.seed;
  cfg.posture.synthesis.seed = cfg.seed;
  return cfg;
}

AppConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path, path);
  nlohmann::json root;
  try {
    in >> root;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what(),
                      path);
  }
  return parse_config(root);
}

namespace {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open file: " + path, path);
  json root;
  try {
    in >> root;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("not valid JSON: ") + e.what(), path);
  }
  return root;
}

}  // namespace

FootLayout load_layout_file(const std::string& path) {
  PostureScenario post;
  parse_posture(json{{"layout", load_json_file(path)}}, post, path);
  return post.layout;
}

MotorPlant load_plant_file(const std::string& path) {
  return parse_plant(load_json_file(path), path);
}

}  // namespace bplat

#include "bplat/cli_app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <numeric>

#include "bplat/config.hpp"
#include "bplat/csv.hpp"

namespace bplat {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

// CLI values carry optional unit suffixes; angles default to degrees and
// lengths to meters.  Parsing must consume the whole token.
double parse_full(const std::string& text, const std::string& what,
                  const std::string& name) {
  size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != text.size() || text.empty())
    throw ConfigError("cannot parse " + what + " '" + text + "' for --" + name,
                      name);
  return value;
}

double parse_angle_arg(const std::string& text, const std::string& name) {
  if (text.size() > 3 && text.substr(text.size() - 3) == "rad")
    return parse_full(text.substr(0, text.size() - 3), "angle", name);
  if (text.size() > 3 && text.substr(text.size() - 3) == "deg")
    return deg2rad(parse_full(text.substr(0, text.size() - 3), "angle", name));
  return deg2rad(parse_full(text, "angle", name));
}

double parse_length_arg(const std::string& text, const std::string& name) {
  if (text.size() > 2 && text.substr(text.size() - 2) == "cm")
    return parse_full(text.substr(0, text.size() - 2), "length", name) / 100.0;
  if (text.size() > 2 && text.substr(text.size() - 2) == "mm")
    return parse_full(text.substr(0, text.size() - 2), "length", name) / 1000.0;
  if (!text.empty() && text.back() == 'm')
    return parse_full(text.substr(0, text.size() - 1), "length", name);
  return parse_full(text, "length", name);
}

void write_text_file(const fs::path& path, const std::string& body) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string(), path.string());
  out << body;
}

void write_json_file(const fs::path& path, const ojson& j) {
  write_text_file(path, j.dump(2) + "\n");
}

ojson channel_json(const ChannelRms& ch, const char* unit) {
  ojson j;
  j[std::string("rms_error_") + unit] = ch.rms_error;
  j[std::string("rms_reference_") + unit] = ch.rms_reference;
  if (ch.accuracy_pct)
    j["accuracy_pct"] = *ch.accuracy_pct;
  else
    j["accuracy_pct"] = nullptr;
  return j;
}

// ---------------------------------------------------------------- simulate

void write_trace_csv(const fs::path& path, const SimulationTrace& trace) {
  std::ostringstream os;
  CsvWriter csv(os);
  csv.header({"t_s", "ref_alpha_rad", "ref_beta_rad", "ref_z_m",
              "out_alpha_rad", "out_beta_rad", "out_z_m", "L1_m", "L2_m",
              "L3_m", "F1_N", "F2_N", "F3_N", "err_alpha_rad", "err_beta_rad",
              "err_z_m"});
  for (const auto& r : trace.rows)
    csv.row({r.t, r.q_ref[0], r.q_ref[1], r.q_ref[2], r.q_out[0], r.q_out[1],
             r.q_out[2], r.lengths[0], r.lengths[1], r.lengths[2],
             r.actuator_forces[0], r.actuator_forces[1], r.actuator_forces[2],
             r.error[0], r.error[1], r.error[2]});
  write_text_file(path, os.str());
}

int run_simulate_one(const AppConfig& cfg, const fs::path& out_dir) {
  const SimulationTrace trace = run_closed_loop(cfg.simulation, cfg.model);
  const RmsReport rep = rms_report(trace);

  write_trace_csv(out_dir / "trace.csv", trace);

  ojson summary;
  summary["command"] = "simulate";
  summary["mode"] = cfg.simulation.mode == SimulationMode::kConsistency
                        ? "consistency"
                        : "mismatch";
  summary["seed"] = cfg.seed;
  summary["samples"] = trace.rows.size();
  summary["aborted"] = trace.aborted;
  summary["abort_reason"] = trace.abort_reason;
  summary["metric"] = rep.metric_definition;
  summary["channels"]["alpha"] = channel_json(rep.alpha, "rad");
  summary["channels"]["beta"] = channel_json(rep.beta, "rad");
  summary["channels"]["z"] = channel_json(rep.z, "m");
  if (rep.min_accuracy_pct)
    summary["min_accuracy_pct"] = *rep.min_accuracy_pct;
  else
    summary["min_accuracy_pct"] = nullptr;
  summary["published_reference"]["min_accuracy_pct"] = 96.2975;
  write_json_file(out_dir / "summary.json", summary);

  std::cout << "simulate: " << trace.rows.size() << " samples -> "
            << (out_dir / "trace.csv").string();
  if (rep.min_accuracy_pct)
    std::cout << "  (min accuracy " << *rep.min_accuracy_pct << "%)";
  std::cout << "\n";
  return trace.aborted ? 3 : 0;
}

// ----------------------------------------------------------------- control

int run_control(const AppConfig& cfg, const fs::path& out_dir) {
  ControlScenario scenario = cfg.control;
  std::array<PidGains, 3> gains = scenario.gains;
  ojson tuning = ojson::array();
  if (scenario.tune) {
    for (int m = 0; m < 3; ++m) {
      const TuneResult tuned =
          tune_gains(scenario.plants[static_cast<size_t>(m)],
                     scenario.reference, GainBox{}, scenario.tune_budget,
                     gains[static_cast<size_t>(m)]);
      gains[static_cast<size_t>(m)] = tuned.gains;
      ojson tj;
      tj["motor"] = m + 1;
      tj["accuracy_pct"] = tuned.accuracy_pct;
      tj["evaluations"] = tuned.evaluations;
      tuning.push_back(tj);
    }
  }

  const TrackingSummary summary =
      simulate_tracking(gains, scenario.plants, scenario.reference);

  std::ostringstream os;
  CsvWriter csv(os);
  csv.header({"t_s", "m1_ref_m", "m1_pos_m", "m1_u_N", "m2_ref_m", "m2_pos_m",
              "m2_u_N", "m3_ref_m", "m3_pos_m", "m3_u_N"});
  const size_t rows = std::min({summary.motors[0].trace.size(),
                                summary.motors[1].trace.size(),
                                summary.motors[2].trace.size()});
  for (size_t k = 0; k < rows; ++k) {
    std::vector<double> row{summary.motors[0].trace[k].t};
    for (int m = 0; m < 3; ++m) {
      const auto& tr = summary.motors[static_cast<size_t>(m)].trace[k];
      row.push_back(tr.reference);
      row.push_back(tr.position);
      row.push_back(tr.force);
    }
    csv.row(row);
  }
  write_text_file(out_dir / "control.csv", os.str());

  ojson sj;
  sj["command"] = "control";
  sj["seed"] = cfg.seed;
  sj["reference"] =
      scenario.reference.kind == ReferenceKind::kStep ? "step" : "sine";
  sj["metric"] = kAccuracyMetricDefinition;
  sj["motors"] = ojson::array();
  for (int m = 0; m < 3; ++m) {
    const auto& res = summary.motors[static_cast<size_t>(m)];
    ojson mj;
    mj["motor"] = m + 1;
    mj["gains"] = {{"kp", gains[static_cast<size_t>(m)].kp},
                   {"ki", gains[static_cast<size_t>(m)].ki},
                   {"kd", gains[static_cast<size_t>(m)].kd}};
    mj["rms_error_m"] = res.rms_error;
    if (res.accuracy_pct)
      mj["accuracy_pct"] = *res.accuracy_pct;
    else
      mj["accuracy_pct"] = nullptr;
    mj["diverged"] = res.diverged;
    sj["motors"].push_back(mj);
  }
  sj["min_accuracy_pct"] = summary.min_accuracy_pct;
  if (!tuning.empty()) sj["tuning"] = tuning;
  sj["published_reference"]["step_accuracy_pct"] = kReferenceStepAccuracies;
  sj["published_reference"]["sine_accuracy_pct"] = kReferenceSineAccuracies;
  write_json_file(out_dir / "summary.json", sj);

  std::cout << "control: min accuracy " << summary.min_accuracy_pct << "% -> "
            << (out_dir / "control.csv").string() << "\n";
  return summary.any_diverged ? 3 : 0;
}

// ----------------------------------------------------------------- posture

void write_frames_csv(const fs::path& path,
                      const std::vector<LoadCellFrame>& frames) {
  std::ostringstream os;
  CsvWriter csv(os);
  csv.header({"t_s", "u1_N", "u2_N", "u3_N", "u4_N", "u5_N", "u6_N", "u7_N",
              "u8_N", "l9_N", "l10_N", "l11_N"});
  for (const auto& f : frames) {
    std::vector<double> row{f.t};
    row.insert(row.end(), f.upper.begin(), f.upper.end());
    row.insert(row.end(), f.lower.begin(), f.lower.end());
    csv.row(row);
  }
  write_text_file(path, os.str());
}

std::vector<LoadCellFrame> read_frames_csv(const std::string& path) {
  const CsvTable table = read_csv(path);
  if (table.header.size() != 12)
    throw ConfigError("frames CSV must have 12 columns (t, u1..u8, l9..l11)",
                      path);
  std::vector<LoadCellFrame> frames;
  frames.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    LoadCellFrame f;
    f.t = row[0];
    for (int i = 0; i < 8; ++i) f.upper[static_cast<size_t>(i)] = row[static_cast<size_t>(i + 1)];
    for (int i = 0; i < 3; ++i) f.lower[static_cast<size_t>(i)] = row[static_cast<size_t>(i + 9)];
    frames.push_back(f);
  }
  return frames;
}

ojson analyze_frames(const std::vector<LoadCellFrame>& frames,
                     const PostureScenario& post) {
  ojson j;
  j["frames"] = frames.size();

  std::array<double, 8> mean_pressure{};
  std::array<bool, 8> saturated{};
  double heel = 0.0, total = 0.0;
  double com_x = 0.0, com_y = 0.0;
  size_t com_count = 0;
  for (const auto& f : frames) {
    const ZonePressures zp = pressure_ratios(f, post.layout);
    for (int i = 0; i < 8; ++i) {
      mean_pressure[static_cast<size_t>(i)] +=
          zp.region_pressure[static_cast<size_t>(i)] / frames.size();
      saturated[static_cast<size_t>(i)] =
          saturated[static_cast<size_t>(i)] || zp.saturated[static_cast<size_t>(i)];
    }
    heel += f.upper[3] + f.upper[7];
    total += std::accumulate(f.upper.begin(), f.upper.end(), 0.0);
    const ComResult com = center_of_mass(f.lower, post.lower_radius);
    if (com.loaded) {
      com_x += com.x;
      com_y += com.y;
      ++com_count;
    }
  }

  j["region_mean_pressure_n_cm2"] = mean_pressure;
  std::array<int, 8> order{};
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return mean_pressure[static_cast<size_t>(a)] > mean_pressure[static_cast<size_t>(b)];
  });
  ojson ord = ojson::array();
  for (int i : order) ord.push_back(i + 1);  // 1-based regions
  j["pressure_ordering_desc"] = ord;
  j["saturated_regions"] = saturated;
  j["heel_share_pct"] = total > 0.0 ? 100.0 * heel / total : 0.0;
  if (com_count > 0) {
    j["com_mean_m"]["x"] = com_x / static_cast<double>(com_count);
    j["com_mean_m"]["y"] = com_y / static_cast<double>(com_count);
  } else {
    j["com_mean_m"] = nullptr;
  }
  return j;
}

void append_events(ojson& summary, const fs::path& out_dir,
                   const std::vector<double>& stimuli,
                   const std::vector<LoadCellFrame>& frames,
                   const ThresholdPolicy& policy) {
  if (stimuli.empty()) return;
  const auto events = detect_reaction(stimuli, frames, policy);
  std::ostringstream os;
  CsvWriter csv(os);
  csv.header({"stimulus_t_s", "response_t_s", "latency_s", "channel"});
  ojson ej = ojson::array();
  for (const auto& ev : events) {
    csv.row({ev.stimulus_time, ev.responded ? ev.response_time : -1.0,
             ev.responded ? ev.latency : -1.0,
             static_cast<double>(ev.channel)});
    ojson e;
    e["stimulus_t_s"] = ev.stimulus_time;
    e["responded"] = ev.responded;
    if (ev.responded) {
      e["response_t_s"] = ev.response_time;
      e["latency_s"] = ev.latency;
      e["channel"] = ev.channel;
    }
    ej.push_back(e);
  }
  write_text_file(out_dir / "events.csv", os.str());
  summary["events"] = ej;
}

int run_posture(const AppConfig& cfg, const fs::path& out_dir) {
  const PostureScenario& post = cfg.posture;
  ojson summary;

  if (post.mode == PostureScenario::Mode::kSynthesize) {
    const SynthesizedStream stream =
        synthesize_loads(post.synthesis, post.layout, post.lower_radius);
    write_frames_csv(out_dir / "frames.csv", stream.frames);
    summary["command"] = "posture-synthesize";
    summary["case"] = load_case_name(post.synthesis.load_case);
    summary["seed"] = post.synthesis.seed;
    summary["rate_hz"] = post.synthesis.rate_hz;
    summary.update(analyze_frames(stream.frames, post));
    summary["stimulus_times_s"] = stream.stimulus_times;
    std::vector<double> stimuli = post.stimuli;
    stimuli.insert(stimuli.end(), stream.stimulus_times.begin(),
                   stream.stimulus_times.end());
    append_events(summary, out_dir, stimuli, stream.frames, post.threshold);
    write_json_file(out_dir / "summary.json", summary);
    std::cout << "posture: synthesized " << stream.frames.size()
              << " frames -> " << (out_dir / "frames.csv").string() << "\n";
    return 0;
  }

  if (post.input_csv.empty())
    throw ConfigError("analyze mode needs an input CSV (--in or input_csv)",
                      "posture.input_csv");
  const auto frames = read_frames_csv(post.input_csv);
  summary["command"] = "posture-analyze";
  summary["input"] = post.input_csv;
  summary.update(analyze_frames(frames, post));
  if (post.has_cop)
    summary["cop_m"] = center_of_pressure(post.cop_moment_x, post.cop_force_y,
                                          post.cop_force_z, post.cop_height);
  append_events(summary, out_dir, post.stimuli, frames, post.threshold);
  write_json_file(out_dir / "summary.json", summary);
  std::cout << "posture: analyzed " << frames.size() << " frames -> "
            << (out_dir / "summary.json").string() << "\n";
  return 0;
}

// ------------------------------------------------------------------ ik/fk

int run_ik(const std::string& alpha_s, const std::string& beta_s,
           const std::string& z_s, const AppConfig& cfg, bool as_json) {
  const double alpha = parse_angle_arg(alpha_s, "alpha");
  const double beta = parse_angle_arg(beta_s, "beta");
  const double z = parse_length_arg(z_s, "z");
  const Pose pose = resolve_constraints(alpha, beta, z, cfg.geometry);
  const LegLengths lengths = inverse_kinematics(pose, cfg.geometry);
  if (as_json) {
    ojson j;
    j["pose"] = {{"x_m", pose.x},         {"y_m", pose.y},
                 {"z_m", pose.z},         {"alpha_deg", rad2deg(pose.alpha)},
                 {"beta_deg", rad2deg(pose.beta)},
                 {"gamma_deg", rad2deg(pose.gamma)}};
    j["lengths_m"] = {lengths[0], lengths[1], lengths[2]};
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("pose: alpha %.6f deg, beta %.6f deg, gamma %.6f deg, "
                "center (%.6f, %.6f, %.6f) m\n",
                rad2deg(pose.alpha), rad2deg(pose.beta), rad2deg(pose.gamma),
                pose.x, pose.y, pose.z);
    std::printf("leg lengths: %.9f %.9f %.9f m\n", lengths[0], lengths[1],
                lengths[2]);
  }
  return 0;
}

int run_fk(const std::string& l1_s, const std::string& l2_s,
           const std::string& l3_s, const AppConfig& cfg, bool as_json) {
  LegLengths lengths;
  lengths[0] = parse_length_arg(l1_s, "l1");
  lengths[1] = parse_length_arg(l2_s, "l2");
  lengths[2] = parse_length_arg(l3_s, "l3");
  const Pose pose = forward_kinematics(lengths, cfg.geometry);
  if (as_json) {
    ojson j;
    j["pose"] = {{"x_m", pose.x},         {"y_m", pose.y},
                 {"z_m", pose.z},         {"alpha_deg", rad2deg(pose.alpha)},
                 {"beta_deg", rad2deg(pose.beta)},
                 {"gamma_deg", rad2deg(pose.gamma)}};
    const auto report = workspace_check(pose, cfg.geometry);
    j["workspace_pass"] = report.pass;
    std::cout << j.dump(2) << "\n";
  } else {
    std::printf("pose: alpha %.9f deg, beta %.9f deg, gamma %.9f deg, "
                "center (%.9f, %.9f, %.9f) m\n",
                rad2deg(pose.alpha), rad2deg(pose.beta), rad2deg(pose.gamma),
                pose.x, pose.y, pose.z);
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"3-DOF balance platform simulator"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_path;
  std::string out_dir = ".";
  bool as_json = false;
  int64_t seed_override = -1;
  unsigned jobs = 1;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--seed", seed_override, "override the configured seed");
  app.add_option("--out-dir", out_dir, "output directory");
  app.add_option("--jobs", jobs, "parallel scenarios (simulate only)");

  auto* ik = app.add_subcommand("ik", "leg lengths from a platform pose");
  std::string alpha_s = "0", beta_s = "0", z_s = "0.45";
  ik->add_option("--alpha", alpha_s, "tilt direction (degrees default)");
  ik->add_option("--beta", beta_s, "tilt magnitude (degrees default)");
  ik->add_option("--z", z_s, "platform height (meters default, cm/mm ok)");
  ik->add_flag("--json", as_json, "JSON output");

  auto* fk = app.add_subcommand("fk", "platform pose from leg lengths");
  std::string l1_s, l2_s, l3_s;
  fk->add_option("--l1", l1_s, "leg 1 length")->required();
  fk->add_option("--l2", l2_s, "leg 2 length")->required();
  fk->add_option("--l3", l3_s, "leg 3 length")->required();
  fk->add_flag("--json", as_json, "JSON output");

  auto* simulate =
      app.add_subcommand("simulate", "closed-loop platform simulation");
  std::vector<std::string> scenario_paths;
  simulate->add_option("--scenario", scenario_paths,
                       "additional scenario configs (run in parallel)");

  auto* control = app.add_subcommand("control", "PID motor tracking");
  std::string ref_override, gains_csv, plant_path;
  control->add_option("--ref", ref_override, "step or sine");
  control->add_option("--gains", gains_csv, "kp,ki,kd for all motors");
  control->add_option("--plant", plant_path, "plant JSON for all motors");
  control->add_subcommand("sim", "run the tracking simulation (default)");

  auto* posture = app.add_subcommand("posture", "load-cell analytics");
  auto* analyze = posture->add_subcommand("analyze", "analyze a frames CSV");
  std::string in_csv, layout_path, stimuli_csv;
  analyze->add_option("--in", in_csv, "frames CSV")->required();
  analyze->add_option("--layout", layout_path, "layout JSON");
  analyze->add_option("--stimuli", stimuli_csv, "stimulus times t1,t2,...");
  auto* synth = posture->add_subcommand("synth", "synthesize a load stream");
  std::string case_name = "static-1";
  double synth_duration = -1.0;
  synth->add_option("--case", case_name, "static-1|static-2|static-3|"
                                         "dynamic-{plantar,dorsi,inver,ever}");
  synth->add_option("--duration", synth_duration, "seconds");

  std::vector<const char*> argv;
  argv.push_back("bplat");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());

    AppConfig cfg =
        config_path.empty() ? AppConfig{} : load_config(config_path);
    if (config_path.empty()) {
      cfg.model.geometry = cfg.geometry;
      cfg.model.actuators = {ActuatorParams{}, ActuatorParams{},
                             ActuatorParams{}};
    }
    if (seed_override >= 0) {
      cfg.seed = static_cast<uint64_t>(seed_override);
      cfg.control.reference.seed = cfg.seed;
      cfg.posture.synthesis.seed = cfg.seed;
    }
    const fs::path out(out_dir);

    if (ik->parsed()) return run_ik(alpha_s, beta_s, z_s, cfg, as_json);
    if (fk->parsed()) return run_fk(l1_s, l2_s, l3_s, cfg, as_json);

    if (simulate->parsed()) {
      if (scenario_paths.empty()) return run_simulate_one(cfg, out);
      // Named scenarios run into per-scenario directories, --jobs at a time.
      std::vector<std::pair<AppConfig, fs::path>> runs;
      runs.emplace_back(cfg, out / "main");
      for (const auto& path : scenario_paths)
        runs.emplace_back(load_config(path), out / fs::path(path).stem());
      int rc = 0;
      const unsigned stride = std::max(1u, jobs);
      for (size_t base = 0; base < runs.size(); base += stride) {
        std::vector<std::future<int>> batch;
        for (size_t k = base; k < std::min(runs.size(), base + stride); ++k)
          batch.push_back(std::async(std::launch::async, [&runs, k] {
            return run_simulate_one(runs[k].first, runs[k].second);
          }));
        for (auto& f : batch) rc = std::max(rc, f.get());
      }
      return rc;
    }

    if (control->parsed()) {
      if (!ref_override.empty()) {
        if (ref_override == "step")
          cfg.control.reference.kind = ReferenceKind::kStep;
        else if (ref_override == "sine")
          cfg.control.reference.kind = ReferenceKind::kSine;
        else
          throw ConfigError("--ref must be step or sine", "control.ref");
      }
      if (!gains_csv.empty()) {
        PidGains g;
        if (std::sscanf(gains_csv.c_str(), "%lf,%lf,%lf", &g.kp, &g.ki,
                        &g.kd) != 3)
          throw ConfigError("--gains must be kp,ki,kd", "control.gains");
        g.validate();
        cfg.control.gains.fill(g);
      }
      if (!plant_path.empty())
        cfg.control.plants.fill(load_plant_file(plant_path));
      return run_control(cfg, out);
    }

    if (posture->parsed()) {
      if (analyze->parsed()) {
        cfg.posture.mode = PostureScenario::Mode::kAnalyze;
        cfg.posture.input_csv = in_csv;
        if (!layout_path.empty())
          cfg.posture.layout = load_layout_file(layout_path);
        if (!stimuli_csv.empty()) {
          cfg.posture.stimuli.clear();
          std::stringstream ss(stimuli_csv);
          std::string tok;
          while (std::getline(ss, tok, ','))
            cfg.posture.stimuli.push_back(std::stod(tok));
        }
      } else if (synth->parsed()) {
        cfg.posture.mode = PostureScenario::Mode::kSynthesize;
        const auto parsed = parse_load_case(case_name);
        if (!parsed)
          throw ConfigError("unknown case '" + case_name + "'", "posture.case");
        cfg.posture.synthesis.load_case = *parsed;
        if (synth_duration >= 0.0)
          cfg.posture.synthesis.duration = synth_duration;
      }
      return run_posture(cfg, out);
    }
    return 1;
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error";
    if (!e.field_path.empty()) std::cerr << " [" << e.field_path << "]";
    std::cerr << ": " << e.what() << "\n";
    return 1;
  } catch (const WorkspaceError& e) {
    std::cerr << "workspace error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    std::cerr << "numerical error: " << e.what()
              << " (residual " << e.residual << ")\n";
    return 3;
  } catch (const SingularityError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace bplat

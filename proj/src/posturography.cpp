#include "bplat/posturography.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

namespace bplat {

void FootLayout::validate() const {
  if (!(foot_length > 0.0))
    throw ConfigError("foot_length must be > 0", "posture.layout.foot_length_m");
  for (double off : {toes_offset(), metatarsals_offset(), midfoot_offset()}) {
    if (off < rail_min || off > rail_max) {
      char buf[96];
      std::snprintf(buf, sizeof(buf),
                    "cell offset %.3f m outside rail travel [%.3f, %.3f] m",
                    off, rail_min, rail_max);
      throw ConfigError(buf, "posture.layout");
    }
  }
  for (double a : {areas.toes, areas.metatarsals, areas.midfoot, areas.heel})
    if (!(a > 0.0))
      throw ConfigError("zone areas must be > 0", "posture.layout.areas_cm2");
}

namespace {

std::array<Eigen::Vector2d, 3> lower_cell_positions(double r_low) {
  const double c30 = std::cos(kPi / 6.0), s30 = std::sin(kPi / 6.0);
  return {Eigen::Vector2d(0.0, r_low),
          Eigen::Vector2d(-r_low * c30, -r_low * s30),
          Eigen::Vector2d(r_low * c30, -r_low * s30)};
}

}  // namespace

ComResult center_of_mass(const std::array<double, 3>& lower, double r_low,
                         double min_total) {
  ComResult out;
  out.total = lower[0] + lower[1] + lower[2];
  if (out.total < min_total) return out;
  const auto pos = lower_cell_positions(r_low);
  Eigen::Vector2d com = Eigen::Vector2d::Zero();
  for (int i = 0; i < 3; ++i) com += lower[static_cast<size_t>(i)] * pos[static_cast<size_t>(i)];
  com /= out.total;
  out.loaded = true;
  out.x = com.x();
  out.y = com.y();
  return out;
}

double center_of_pressure(double moment_x, double force_y, double force_z,
                          double h, double fz_min) {
  if (std::abs(force_z) < fz_min)
    throw DomainError("center of pressure undefined for near-zero vertical force");
  return (moment_x - h * force_y) / force_z;
}

ZonePressures pressure_ratios(const LoadCellFrame& frame,
                              const FootLayout& layout) {
  const std::array<double, 4> areas{layout.areas.toes, layout.areas.metatarsals,
                                    layout.areas.midfoot, layout.areas.heel};
  ZonePressures out;
  for (int i = 0; i < 8; ++i) {
    const double force = frame.upper[static_cast<size_t>(i)];
    out.saturated[static_cast<size_t>(i)] = force > kUpperCellCapacity;
    out.region_pressure[static_cast<size_t>(i)] = force / areas[static_cast<size_t>(i % 4)];
  }
  out.left = {out.region_pressure[0], out.region_pressure[1],
              out.region_pressure[2], out.region_pressure[3],
              frame.upper[0] + frame.upper[1] + frame.upper[2] + frame.upper[3]};
  out.right = {out.region_pressure[4], out.region_pressure[5],
               out.region_pressure[6], out.region_pressure[7],
               frame.upper[4] + frame.upper[5] + frame.upper[6] + frame.upper[7]};
  return out;
}

std::optional<LoadCase> parse_load_case(const std::string& name) {
  if (name == "static-1") return LoadCase::kStatic1;
  if (name == "static-2") return LoadCase::kStatic2;
  if (name == "static-3") return LoadCase::kStatic3;
  if (name == "dynamic-plantar") return LoadCase::kDynPlantar;
  if (name == "dynamic-dorsi") return LoadCase::kDynDorsi;
  if (name == "dynamic-inver") return LoadCase::kDynInversion;
  if (name == "dynamic-ever") return LoadCase::kDynEversion;
  return std::nullopt;
}

std::string load_case_name(LoadCase c) {
  switch (c) {
    case LoadCase::kStatic1: return "static-1";
    case LoadCase::kStatic2: return "static-2";
    case LoadCase::kStatic3: return "static-3";
    case LoadCase::kDynPlantar: return "dynamic-plantar";
    case LoadCase::kDynDorsi: return "dynamic-dorsi";
    case LoadCase::kDynInversion: return "dynamic-inver";
    case LoadCase::kDynEversion: return "dynamic-ever";
  }
  return "static-1";
}

namespace {

// Measured zone-pressure profiles [N/cm^2] of the designed test loads and
// their spreads, regions 1..8.
constexpr std::array<double, 8> kCase1Mean{49.02, 43.51, 10.67, 130.82,
                                           46.79, 44.08, 9.56, 133.79};
constexpr std::array<double, 8> kCase1Std{0.086, 0.066, 0.058, 0.102,
                                          0.533, 0.124, 0.489, 0.241};
constexpr std::array<double, 8> kCase2Mean{81.52, 83.18, 10.54, 64.07,
                                           74.4, 72.17, 4.02, 65.57};
constexpr std::array<double, 8> kCase2Std{0.872, 1.872, 0.195, 1.028,
                                          0.489, 0.563, 0.095, 0.172};
constexpr std::array<double, 8> kCase3Mean{19.97, 28.53, 10.39, 163.76,
                                           26.84, 19.68, 3.82, 159.35};
constexpr std::array<double, 8> kCase3Std{0.062, 0.186, 0.051, 0.041,
                                          0.443, 0.426, 0.223, 0.858};

struct CaseProfile {
  std::array<double, 8> start_mean;
  std::array<double, 8> end_mean;
  std::array<double, 8> noise;
  bool dynamic = false;
};

std::array<double, 8> laterally_shifted(const std::array<double, 8>& base,
                                        double left_scale,
                                        double right_scale) {
  std::array<double, 8> out{};
  for (int i = 0; i < 4; ++i) out[static_cast<size_t>(i)] = base[static_cast<size_t>(i)] * left_scale;
  for (int i = 4; i < 8; ++i) out[static_cast<size_t>(i)] = base[static_cast<size_t>(i)] * right_scale;
  return out;
}

CaseProfile profile_of(LoadCase c) {
  switch (c) {
    case LoadCase::kStatic1: return {kCase1Mean, kCase1Mean, kCase1Std, false};
    case LoadCase::kStatic2: return {kCase2Mean, kCase2Mean, kCase2Std, false};
    case LoadCase::kStatic3: return {kCase3Mean, kCase3Mean, kCase3Std, false};
    case LoadCase::kDynPlantar:
      return {kCase1Mean, kCase2Mean, kCase1Std, true};
    case LoadCase::kDynDorsi:
      return {kCase1Mean, kCase3Mean, kCase1Std, true};
    case LoadCase::kDynInversion:
      return {kCase1Mean, laterally_shifted(kCase1Mean, 0.55, 1.45), kCase1Std,
              true};
    case LoadCase::kDynEversion:
      return {kCase1Mean, laterally_shifted(kCase1Mean, 1.45, 0.55), kCase1Std,
              true};
  }
  return {kCase1Mean, kCase1Mean, kCase1Std, false};
}

// Fore-aft lever arms of the zones relative to the lower-platform center,
// heels behind the center, and the lateral offsets of the two feet.
struct LeverArms {
  std::array<double, 4> fore_aft;  // toes..heel [m]
  double foot_lateral = 0.08;     // [m]
};

LeverArms lever_arms(const FootLayout& layout) {
  const double heel_y = -0.4 * layout.foot_length;
  return {{heel_y + layout.toes_offset(), heel_y + layout.metatarsals_offset(),
           heel_y + layout.midfoot_offset(), heel_y},
          0.08};
}

}  // namespace

SynthesizedStream synthesize_loads(const SynthesisConfig& config,
                                   const FootLayout& layout, double r_low) {
  layout.validate();
  if (!(config.rate_hz > 0.0))
    throw ConfigError("rate must be > 0", "posture.rate_hz");
  if (config.duration < 0.0)
    throw ConfigError("duration must be >= 0", "posture.duration_s");

  const CaseProfile profile = profile_of(config.load_case);
  const std::array<double, 4> areas{layout.areas.toes, layout.areas.metatarsals,
                                    layout.areas.midfoot, layout.areas.heel};
  const double total_force = config.total_mass * kGravity;

  auto region_forces = [&](const std::array<double, 8>& mean) {
    // Profile pressures scaled so the region forces sum to the total load.
    std::array<double, 8> force{};
    double denom = 0.0;
    for (int i = 0; i < 8; ++i)
      denom += mean[static_cast<size_t>(i)] * areas[static_cast<size_t>(i % 4)];
    for (int i = 0; i < 8; ++i)
      force[static_cast<size_t>(i)] =
          total_force * mean[static_cast<size_t>(i)] * areas[static_cast<size_t>(i % 4)] / denom;
    return force;
  };

  const LeverArms arms = lever_arms(layout);
  const auto pos = lower_cell_positions(r_low);
  Eigen::Matrix3d cell_system;
  cell_system << 1.0, 1.0, 1.0,
      pos[0].x(), pos[1].x(), pos[2].x(),
      pos[0].y(), pos[1].y(), pos[2].y();
  const Eigen::PartialPivLU<Eigen::Matrix3d> cell_solver(cell_system);

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SynthesizedStream out;
  if (profile.dynamic && config.duration > config.hold_time)
    out.stimulus_times.push_back(config.hold_time);

  const double dt = 1.0 / config.rate_hz;
  const int n = static_cast<int>(std::llround(config.duration * config.rate_hz));
  out.frames.reserve(static_cast<size_t>(n) + 1);

  const double force_scale =
      total_force /
      [&] {
        double d = 0.0;
        for (int i = 0; i < 8; ++i)
          d += kCase1Mean[static_cast<size_t>(i)] * areas[static_cast<size_t>(i % 4)];
        return d;
      }();

  for (int k = 0; k <= n; ++k) {
    const double t = k * dt;
    double lambda = 0.0;
    if (profile.dynamic && t > config.hold_time)
      lambda = std::min((t - config.hold_time) / 5.0, 1.0);

    std::array<double, 8> mean{};
    for (int i = 0; i < 8; ++i)
      mean[static_cast<size_t>(i)] = (1.0 - lambda) * profile.start_mean[static_cast<size_t>(i)] +
                lambda * profile.end_mean[static_cast<size_t>(i)];
    std::array<double, 8> force = region_forces(mean);

    LoadCellFrame frame;
    frame.t = t;
    double upper_total = 0.0;
    double moment_x = 0.0, moment_y = 0.0;
    for (int i = 0; i < 8; ++i) {
      const double jitter = config.noise_scale * force_scale *
                            profile.noise[static_cast<size_t>(i)] *
                            areas[static_cast<size_t>(i % 4)] * gauss(rng);
      const double f = std::max(force[static_cast<size_t>(i)] + jitter, 0.0);
      frame.upper[static_cast<size_t>(i)] = f;
      upper_total += f;
      const double x = (i < 4 ? -arms.foot_lateral : arms.foot_lateral);
      const double y = arms.fore_aft[static_cast<size_t>(i % 4)];
      moment_x += f * x;
      moment_y += f * y;
    }

    // Lower cells reproduce the same total load at the upper centroid.
    const Eigen::Vector3d rhs(upper_total, moment_x, moment_y);
    const Eigen::Vector3d w = cell_solver.solve(rhs);
    for (int i = 0; i < 3; ++i)
      frame.lower[static_cast<size_t>(i)] = std::max(w[i], 0.0);
    out.frames.push_back(frame);
  }
  return out;
}

std::vector<ReactionEvent> detect_reaction(
    const std::vector<double>& stimulus_times,
    const std::vector<LoadCellFrame>& frames, const ThresholdPolicy& policy) {
  for (size_t k = 1; k < frames.size(); ++k)
    if (!(frames[k].t > frames[k - 1].t))
      throw DomainError("frame timestamps must be strictly increasing");

  auto channel_value = [](const LoadCellFrame& f, int ch) {
    return ch < 8 ? f.upper[static_cast<size_t>(ch)] : f.lower[static_cast<size_t>(ch - 8)];
  };

  std::vector<ReactionEvent> events;
  for (double t_stim : stimulus_times) {
    ReactionEvent ev;
    ev.stimulus_time = t_stim;

    // Baseline statistics per channel over the window before the stimulus.
    std::array<double, 11> mean{}, sq{};
    int count = 0;
    for (const auto& f : frames) {
      if (f.t < t_stim - policy.baseline_window || f.t >= t_stim) continue;
      ++count;
      for (int ch = 0; ch < 11; ++ch) {
        const double v = channel_value(f, ch);
        mean[static_cast<size_t>(ch)] += v;
        sq[static_cast<size_t>(ch)] += v * v;
      }
    }
    if (count >= 2) {
      for (int ch = 0; ch < 11; ++ch) {
        mean[static_cast<size_t>(ch)] /= count;
        const double var =
            std::max(sq[static_cast<size_t>(ch)] / count -
                         mean[static_cast<size_t>(ch)] * mean[static_cast<size_t>(ch)],
                     0.0);
        sq[static_cast<size_t>(ch)] = std::sqrt(var);  // reuse as sigma
      }
      for (const auto& f : frames) {
        if (f.t <= t_stim || f.t > t_stim + policy.response_window) continue;
        for (int ch = 0; ch < 11; ++ch) {
          const double threshold = std::max(
              policy.k_sigma * sq[static_cast<size_t>(ch)], policy.min_threshold);
          if (std::abs(channel_value(f, ch) - mean[static_cast<size_t>(ch)]) >
              threshold) {
            ev.responded = true;
            ev.response_time = f.t;
            ev.latency = f.t - t_stim;
            ev.channel = ch;
            break;
          }
        }
        if (ev.responded) break;
      }
    }
    events.push_back(ev);
  }
  return events;
}

}  // namespace bplat

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bplat/errors.hpp"
#include "bplat/units.hpp"

// Load-cell data model and balance analytics.
//
// The upper platform carries eight cells, four per foot (regions 1-4 left,
// 5-8 right, each foot ordered toes / metatarsals / midfoot / heel).  The
// lower platform carries three cells on an equilateral triangle of
// circumradius r_low, at 90, 210 and 330 degrees, used for the center of
// mass.  Forces are newtons throughout.

namespace bplat {

constexpr double kGravity = 9.8;                      // [m/s^2]
constexpr double kUpperCellCapacity = 10.0 * kGravity;  // [N] per cell
constexpr double kLowerCellCapacity = 40.0 * kGravity;  // [N] per cell

struct LoadCellFrame {
  double t = 0.0;                  // [s]
  std::array<double, 8> upper{};   // [N] regions 1..8
  std::array<double, 3> lower{};   // [N] cells 9..11
};

// Zone contact areas in cm^2.  The heel area is calibrated so that the
// standing load profile routes half of the total weight through the heels.
struct FootZoneAreas {
  double toes = 25.0;
  double metatarsals = 40.0;
  double midfoot = 30.0;
  double heel = 24.5862;
};

// Cell placement along one foot.  The heel cell is the fixed origin; the
// other cells ride rails and sit at fractions of the foot length.
struct FootLayout {
  double foot_length = 0.2615;  // [m]
  double rail_min = 0.03;       // [m] admissible rail travel
  double rail_max = 0.26;
  double toes_fraction = 0.90;
  double metatarsals_fraction = 0.72;
  double midfoot_fraction = 0.35;
  FootZoneAreas areas;

  void validate() const;
  double toes_offset() const { return toes_fraction * foot_length; }
  double metatarsals_offset() const { return metatarsals_fraction * foot_length; }
  double midfoot_offset() const { return midfoot_fraction * foot_length; }
};

struct ComResult {
  bool loaded = false;
  double x = 0.0;  // [m]
  double y = 0.0;
  double total = 0.0;  // [N]
};

// Weighted centroid of the three lower-cell positions; "unloaded" below
// min_total.
ComResult center_of_mass(const std::array<double, 3>& lower, double r_low,
                         double min_total = 1.0);

// COP = (M_x - h*F_y) / F_z with h the base-to-ground offset.  Throws
// DomainError when |F_z| is below fz_min.
double center_of_pressure(double moment_x, double force_y, double force_z,
                          double h = 0.03, double fz_min = 1e-6);

struct ZonePressures {
  struct Foot {
    double toes = 0.0;  // [N/cm^2]
    double metatarsals = 0.0;
    double midfoot = 0.0;
    double heel = 0.0;
    double total_force = 0.0;  // [N]
  };
  Foot left, right;
  std::array<bool, 8> saturated{};
  std::array<double, 8> region_pressure{};  // [N/cm^2] regions 1..8
};

ZonePressures pressure_ratios(const LoadCellFrame& frame,
                              const FootLayout& layout);

enum class LoadCase {
  kStatic1,       // nominal standing distribution
  kStatic2,       // load shifted toward the toes/metatarsals
  kStatic3,       // load shifted toward the heels
  kDynPlantar,    // ankle motions applied after a hold period
  kDynDorsi,
  kDynInversion,
  kDynEversion,
};

std::optional<LoadCase> parse_load_case(const std::string& name);
std::string load_case_name(LoadCase c);

struct SynthesisConfig {
  LoadCase load_case = LoadCase::kStatic1;
  double total_mass = 20.0;  // [kg] of the designed test loads
  double duration = 10.0;    // [s]
  double rate_hz = 100.0;
  double hold_time = 10.0;   // [s] before dynamic motion begins
  double noise_scale = 1.0;  // scales the per-region jitter
  uint64_t seed = 1;
};

struct SynthesizedStream {
  std::vector<LoadCellFrame> frames;
  std::vector<double> stimulus_times;  // motion onsets (dynamic cases)
};

// Deterministic load-cell stream whose zone distribution follows the case
// profile; the lower cells carry the same total at the matching centroid.
SynthesizedStream synthesize_loads(const SynthesisConfig& config,
                                   const FootLayout& layout, double r_low);

struct ReactionEvent {
  double stimulus_time = 0.0;
  double response_time = 0.0;
  double latency = 0.0;
  int channel = -1;  // 0..7 upper, 8..10 lower
  bool responded = false;
};

struct ThresholdPolicy {
  double k_sigma = 5.0;
  double min_threshold = 0.5;     // [N] floor for flat baselines
  double baseline_window = 1.0;   // [s] before the stimulus
  double response_window = 2.0;   // [s] after the stimulus
};

// First time any channel leaves its pre-stimulus baseline band after each
// stimulus.  Timestamps must be monotone.
std::vector<ReactionEvent> detect_reaction(
    const std::vector<double>& stimulus_times,
    const std::vector<LoadCellFrame>& frames,
    const ThresholdPolicy& policy = ThresholdPolicy{});

}  // namespace bplat

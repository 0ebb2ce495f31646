#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bplat/dynamics.hpp"

// Closed-loop simulation of the platform: reference generation in the
// reduced coordinates q = (alpha, beta, z), constraint resolution, inverse
// kinematics, inverse dynamics along the reference, forward dynamics, and
// pose reconstruction through forward kinematics, with per-channel RMS error
// reporting.
//
// Two modes:
//  - consistency: every step closes the loop algebraically at the reference
//    state (force from inverse dynamics, acceleration back via the reduced
//    forward solve, pose back via FK of the commanded leg lengths).  Errors
//    measure only the numerical closure of the equations.
//  - mismatch: the plant is integrated with a fixed-step RK4 in the reduced
//    coordinates, driven by the force computed from the (possibly different)
//    nominal model along the reference, plus optional PD assistance.  With
//    unit mismatch scales and zero assistance the reference trajectory is the
//    exact solution, which is what the integrator-order checks use.

namespace bplat {

enum class ReferenceKind { kStep, kSine, kComposite };

struct ChannelSpec {
  double offset = 0.0;
  double amplitude = 0.0;
  double frequency = 0.0;  // [Hz]
  double phase = 0.0;      // [rad]
};

struct ReferenceTrajectory {
  ReferenceKind kind = ReferenceKind::kSine;
  ChannelSpec alpha;
  ChannelSpec beta;
  ChannelSpec z;       // offset 0 means "use the home height"
  double step_time = 0.5;   // [s], steps only
  double ramp = 0.05;       // [s] cosine ramp so accelerations stay finite
  double duration = 10.0;   // [s]; 0 gives an empty trace
  double sample_dt = 1e-3;  // [s]

  // Throws ConfigError / WorkspaceError when the spec is malformed or the
  // commanded extremes leave the workspace.
  void validate(const PlatformGeometry& geom) const;
};

struct ReferenceSample {
  double t = 0.0;
  Vector3d q = Vector3d::Zero();    // (alpha, beta, z)
  Vector3d qd = Vector3d::Zero();
  Vector3d qdd = Vector3d::Zero();
};

std::vector<ReferenceSample> generate_reference(const ReferenceTrajectory& spec,
                                                const PlatformGeometry& geom);

enum class SimulationMode { kConsistency, kMismatch };

struct MismatchSpec {
  double platform_mass_scale = 1.0;
  double leg_mass_scale = 1.0;
};

struct SimulationConfig {
  ReferenceTrajectory reference;
  SimulationMode mode = SimulationMode::kConsistency;
  MismatchSpec mismatch;
  // Per-channel PD assistance in the reduced coordinates (mismatch mode).
  // The three channels carry very different generalized inertias, so the
  // gains are per channel.
  Vector3d feedback_kp = Vector3d::Zero();
  Vector3d feedback_kd = Vector3d::Zero();
  // Integrating runs need the tilt bounded away from zero, where the tilt
  // direction is a gauge freedom; consistency runs do not.
  double min_tilt = deg2rad(0.5);
};

struct TraceRow {
  double t = 0.0;
  Vector3d q_ref = Vector3d::Zero();
  Vector3d q_out = Vector3d::Zero();
  LegLengths lengths{};
  Vector3d actuator_forces = Vector3d::Zero();  // [N] along each leg
  Vector3d error = Vector3d::Zero();            // q_ref - q_out
};

struct SimulationTrace {
  std::vector<TraceRow> rows;
  bool aborted = false;
  std::string abort_reason;
};

SimulationTrace run_closed_loop(const SimulationConfig& config,
                                const SystemModel& model);

struct ChannelRms {
  double rms_error = 0.0;
  double rms_reference = 0.0;
  std::optional<double> accuracy_pct;  // empty when the reference is silent
};

struct RmsReport {
  ChannelRms alpha, beta, z;
  std::optional<double> min_accuracy_pct;
  std::string metric_definition;
};

// accuracy% = 100 * (1 - RMS(error)/RMS(reference)); undefined when the
// reference channel has no power.
RmsReport rms_report(const SimulationTrace& trace);
double accuracy_pct(double rms_error, double rms_reference);

// Definition string stamped into every report header.
extern const char* kAccuracyMetricDefinition;

}  // namespace bplat

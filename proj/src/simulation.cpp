#include "bplat/simulation.hpp"

#include <algorithm>
#include <cmath>

namespace bplat {

const char* kAccuracyMetricDefinition =
    "accuracy_pct = 100 * (1 - rms(error) / rms(reference)); undefined when "
    "the reference channel has zero power";

double accuracy_pct(double rms_error, double rms_reference) {
  return 100.0 * (1.0 - rms_error / rms_reference);
}

namespace {

double home_height(const PlatformGeometry& geom) {
  const double mid = geom.actuator_min_length + geom.stroke_max / 2.0;
  const double dr = geom.base_radius - geom.platform_radius;
  return std::sqrt(std::max(mid * mid - dr * dr, 1e-6));
}

struct ChannelEval {
  ChannelSpec spec;
  bool stepped = false;
  double step_time = 0.0;
  double ramp = 0.05;

  void eval(double t, double& q, double& qd, double& qdd) const {
    if (!stepped) {
      const double w = 2.0 * kPi * spec.frequency;
      const double ph = w * t + spec.phase;
      q = spec.offset + spec.amplitude * std::sin(ph);
      qd = spec.amplitude * w * std::cos(ph);
      qdd = -spec.amplitude * w * w * std::sin(ph);
      return;
    }
    qd = 0.0;
    qdd = 0.0;
    if (t <= step_time) {
      q = spec.offset;
    } else if (t >= step_time + ramp) {
      q = spec.offset + spec.amplitude;
    } else {
      const double x = (t - step_time) / ramp;
      q = spec.offset + spec.amplitude * 0.5 * (1.0 - std::cos(kPi * x));
      qd = spec.amplitude * 0.5 * kPi / ramp * std::sin(kPi * x);
      qdd = spec.amplitude * 0.5 * kPi * kPi / (ramp * ramp) *
            std::cos(kPi * x);
    }
  }
};

struct ReferenceEval {
  std::array<ChannelEval, 3> channels;

  ReferenceSample at(double t) const {
    ReferenceSample s;
    s.t = t;
    for (int c = 0; c < 3; ++c)
      channels[static_cast<size_t>(c)].eval(t, s.q[c], s.qd[c], s.qdd[c]);
    return s;
  }
};

ReferenceEval make_eval(const ReferenceTrajectory& spec,
                        const PlatformGeometry& geom) {
  ReferenceEval ev;
  ev.channels = {ChannelEval{spec.alpha}, ChannelEval{spec.beta},
                 ChannelEval{spec.z}};
  if (ev.channels[2].spec.offset == 0.0)
    ev.channels[2].spec.offset = home_height(geom);
  if (spec.kind == ReferenceKind::kStep) {
    for (auto& ch : ev.channels) {
      ch.stepped = true;
      ch.step_time = spec.step_time;
      ch.ramp = std::max(spec.ramp, 1e-4);
    }
  }
  return ev;
}

}  // namespace

void ReferenceTrajectory::validate(const PlatformGeometry& geom) const {
  if (duration < 0.0)
    throw ConfigError("duration must be >= 0", "simulation.duration");
  if (!(sample_dt > 0.0)) throw ConfigError("dt must be > 0", "simulation.dt");
  if (kind == ReferenceKind::kStep && !(ramp > 0.0))
    throw ConfigError("step ramp must be > 0", "simulation.reference.ramp_s");

  const ReferenceEval ev = make_eval(*this, geom);
  const int probes = 1024;
  const double span = duration > 0.0 ? duration : 1.0;
  for (int k = 0; k <= probes; ++k) {
    const ReferenceSample s = ev.at(span * k / probes);
    // resolve_constraints enforces the tilt limit; IK enforces travel.
    inverse_kinematics(resolve_constraints(s.q[0], s.q[1], s.q[2], geom),
                       geom);
  }
}

std::vector<ReferenceSample> generate_reference(const ReferenceTrajectory& spec,
                                                const PlatformGeometry& geom) {
  spec.validate(geom);
  const ReferenceEval ev = make_eval(spec, geom);
  const int n = static_cast<int>(std::llround(spec.duration / spec.sample_dt));
  std::vector<ReferenceSample> out;
  out.reserve(static_cast<size_t>(n) + 1);
  for (int k = 0; k <= n && spec.duration > 0.0; ++k)
    out.push_back(ev.at(k * spec.sample_dt));
  return out;
}

namespace {

struct ReducedDynamics {
  const SystemModel* model;

  struct Terms {
    Matrix3d Mr;
    Vector3d bias;  // E^T (C Xd + G + M Ed qd)
    Eigen::Matrix<double, 6, 3> E;
    DynamicsMatrices dyn;
    TaskState state;
  };

  Terms terms(const Vector3d& q, const Vector3d& qd) const {
    Terms t;
    t.E = constraint_embedding(q, model->geometry);
    const auto Ed = constraint_embedding_rate(q, qd, model->geometry);
    t.state.X = embed_reduced(q, model->geometry);
    t.state.Xd = t.E * qd;
    t.dyn = assemble(t.state, *model);
    t.Mr = t.E.transpose() * t.dyn.M * t.E;
    t.bias = t.E.transpose() *
             (t.dyn.C * t.state.Xd + t.dyn.G + t.dyn.M * (Ed * qd));
    return t;
  }
};

Vector3d actuator_forces_for(const Vector3d& q, const Vector3d& generalized,
                             const PlatformGeometry& geom) {
  // Leg forces f with K^T f = Q, K the reduced length jacobian.  At zero
  // tilt the tilt-direction row of K^T vanishes (gauge freedom), so use a
  // rank-revealing least-squares solve.
  const Matrix3d K = reduced_leg_jacobian(q[0], q[1], q[2], geom);
  return Eigen::CompleteOrthogonalDecomposition<Matrix3d>(K.transpose())
      .solve(generalized);
}

SystemModel scaled_plant(const SystemModel& nominal, const MismatchSpec& mm) {
  SystemModel plant = nominal;
  plant.body.mass *= mm.platform_mass_scale;
  plant.body.inertia *= mm.platform_mass_scale;
  for (auto& a : plant.actuators) {
    a.piston_mass *= mm.leg_mass_scale;
    a.stroke_mass *= mm.leg_mass_scale;
    a.piston_inertia *= mm.leg_mass_scale;
    a.stroke_inertia *= mm.leg_mass_scale;
  }
  return plant;
}

}  // namespace

SimulationTrace run_closed_loop(const SimulationConfig& config,
                                const SystemModel& model) {
  const PlatformGeometry& geom = model.geometry;
  config.reference.validate(geom);
  const ReferenceEval ref = make_eval(config.reference, geom);
  const double dt = config.reference.sample_dt;
  const int n =
      static_cast<int>(std::llround(config.reference.duration / dt));

  SimulationTrace trace;
  if (config.reference.duration <= 0.0) return trace;
  trace.rows.reserve(static_cast<size_t>(n) + 1);

  const ReducedDynamics nominal{&model};

  if (config.mode == SimulationMode::kConsistency) {
    Pose fk_guess = resolve_constraints(ref.at(0.0).q[0], ref.at(0.0).q[1],
                                        ref.at(0.0).q[2], geom);
    for (int k = 0; k <= n; ++k) {
      const ReferenceSample s = ref.at(k * dt);
      TraceRow row;
      row.t = s.t;
      row.q_ref = s.q;
      try {
        const Pose pose = resolve_constraints(s.q[0], s.q[1], s.q[2], geom);
        row.lengths = inverse_kinematics(pose, geom);

        const auto terms = nominal.terms(s.q, s.qd);
        TaskState full = terms.state;
        full.Xdd = terms.E * s.qdd +
                   constraint_embedding_rate(s.q, s.qd, geom) * s.qd;
        const Vector6d force = inverse_dynamics(full, model);

        // Forward solve at the same state must return the reference
        // acceleration; a disagreement means the equations do not close.
        const Vector3d rhs = terms.E.transpose() * force - terms.bias;
        const Vector3d qdd_rec =
            Eigen::CompleteOrthogonalDecomposition<Matrix3d>(terms.Mr)
                .solve(rhs);
        const Vector3d closure = terms.Mr * (qdd_rec - s.qdd);
        if (closure.cwiseAbs().maxCoeff() > 1e-6) {
          trace.aborted = true;
          trace.abort_reason = "dynamics closure failure";
          trace.rows.push_back(row);
          break;
        }

        const Pose rec = forward_kinematics(row.lengths, geom, fk_guess);
        fk_guess = rec;
        row.q_out = Vector3d(rec.alpha, rec.beta, rec.z);
        // The tilt direction is unobservable from lengths at zero tilt.
        if (std::abs(s.q[1]) < 1e-12 && std::abs(rec.beta) < 1e-9)
          row.q_out[0] = s.q[0];
        row.error = row.q_ref - row.q_out;
        row.actuator_forces =
            actuator_forces_for(s.q, terms.E.transpose() * force, geom);
      } catch (const std::exception& e) {
        trace.aborted = true;
        trace.abort_reason = e.what();
        trace.rows.push_back(row);
        break;
      }
      trace.rows.push_back(row);
    }
    return trace;
  }

  // Integrating mode: tilt must stay away from the gauge singularity.
  {
    const int probes = 1024;
    for (int k = 0; k <= probes; ++k) {
      const double t = config.reference.duration * k / probes;
      if (std::abs(ref.at(t).q[1]) < config.min_tilt)
        throw WorkspaceError(
            "integrating mode needs |beta| >= min_tilt along the reference; "
            "offset the tilt channel");
    }
  }

  const SystemModel plant_model = scaled_plant(model, config.mismatch);
  const ReducedDynamics plant{&plant_model};

  auto accel = [&](double t, const Vector3d& q, const Vector3d& qd) {
    const ReferenceSample s = ref.at(t);
    TaskState ref_state;
    const auto E_ref = constraint_embedding(s.q, geom);
    ref_state.X = embed_reduced(s.q, geom);
    ref_state.Xd = E_ref * s.qd;
    ref_state.Xdd =
        E_ref * s.qdd + constraint_embedding_rate(s.q, s.qd, geom) * s.qd;
    const Vector6d force = inverse_dynamics(ref_state, model);

    const auto terms = plant.terms(q, qd);
    Vector3d Q = terms.E.transpose() * force - terms.bias;
    Q += config.feedback_kp.cwiseProduct(s.q - q) +
         config.feedback_kd.cwiseProduct(s.qd - qd);
    return std::pair<Vector3d, Vector3d>(
        terms.Mr.ldlt().solve(Q), terms.E.transpose() * force);
  };

  ReferenceSample s0 = ref.at(0.0);
  Vector3d q = s0.q, qd = s0.qd;
  for (int k = 0; k <= n; ++k) {
    const double t = k * dt;
    const ReferenceSample s = ref.at(t);
    TraceRow row;
    row.t = t;
    row.q_ref = s.q;
    row.q_out = q;
    row.error = row.q_ref - row.q_out;
    try {
      const Pose pose = resolve_constraints(q[0], q[1], q[2], geom);
      row.lengths = inverse_kinematics(pose, geom);
      const auto [qdd0, Q_applied] = accel(t, q, qd);
      (void)qdd0;
      row.actuator_forces = actuator_forces_for(q, Q_applied, geom);
      trace.rows.push_back(row);
      if (k == n) break;

      const auto f1 = accel(t, q, qd);
      const Vector3d k1q = qd, k1v = f1.first;
      const auto f2 = accel(t + dt / 2, q + dt / 2 * k1q, qd + dt / 2 * k1v);
      const Vector3d k2q = qd + dt / 2 * k1v, k2v = f2.first;
      const auto f3 = accel(t + dt / 2, q + dt / 2 * k2q, qd + dt / 2 * k2v);
      const Vector3d k3q = qd + dt / 2 * k2v, k3v = f3.first;
      const auto f4 = accel(t + dt, q + dt * k3q, qd + dt * k3v);
      const Vector3d k4q = qd + dt * k3v, k4v = f4.first;
      q += dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
      qd += dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    } catch (const std::exception& e) {
      trace.aborted = true;
      trace.abort_reason = e.what();
      if (trace.rows.empty() || trace.rows.back().t < t)
        trace.rows.push_back(row);
      break;
    }
  }
  return trace;
}

namespace {

ChannelRms channel_rms(const SimulationTrace& trace, int c) {
  ChannelRms out;
  if (trace.rows.empty()) return out;
  double sum_err = 0.0, sum_ref = 0.0;
  for (const auto& row : trace.rows) {
    sum_err += row.error[c] * row.error[c];
    sum_ref += row.q_ref[c] * row.q_ref[c];
  }
  const double inv_n = 1.0 / static_cast<double>(trace.rows.size());
  out.rms_error = std::sqrt(sum_err * inv_n);
  out.rms_reference = std::sqrt(sum_ref * inv_n);
  if (out.rms_reference > 0.0)
    out.accuracy_pct = accuracy_pct(out.rms_error, out.rms_reference);
  return out;
}

}  // namespace

RmsReport rms_report(const SimulationTrace& trace) {
  RmsReport rep;
  rep.metric_definition = kAccuracyMetricDefinition;
  rep.alpha = channel_rms(trace, 0);
  rep.beta = channel_rms(trace, 1);
  rep.z = channel_rms(trace, 2);
  for (const ChannelRms* ch : {&rep.alpha, &rep.beta, &rep.z}) {
    if (!ch->accuracy_pct) continue;
    if (!rep.min_accuracy_pct || *ch->accuracy_pct < *rep.min_accuracy_pct)
      rep.min_accuracy_pct = ch->accuracy_pct;
  }
  return rep;
}

}  // namespace bplat

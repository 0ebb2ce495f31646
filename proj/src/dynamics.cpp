#include "bplat/dynamics.hpp"

#include <cmath>

namespace bplat {

void ActuatorParams::validate() const {
  if (!(piston_mass > 0.0) || !(stroke_mass > 0.0))
    throw ConfigError("actuator masses must be > 0", "dynamics.actuators");
  if (!(piston_half_length > 0.0) || !(stroke_half_length > 0.0))
    throw ConfigError("actuator half lengths must be > 0", "dynamics.actuators");
  auto check_psd = [](const Matrix3d& I, const char* which) {
    if ((I - I.transpose()).cwiseAbs().maxCoeff() > 1e-9)
      throw ConfigError(std::string(which) + " inertia must be symmetric",
                        "dynamics.actuators");
    Eigen::SelfAdjointEigenSolver<Matrix3d> es(I);
    if (es.eigenvalues().minCoeff() < -1e-12)
      throw ConfigError(std::string(which) + " inertia must be PSD",
                        "dynamics.actuators");
  };
  check_psd(piston_inertia, "piston");
  check_psd(stroke_inertia, "stroke");
}

void PlatformBody::validate() const {
  if (!(mass > 0.0))
    throw ConfigError("platform mass must be > 0", "dynamics.platform.mass_kg");
  if ((inertia - inertia.transpose()).cwiseAbs().maxCoeff() > 1e-9)
    throw ConfigError("platform inertia must be symmetric",
                      "dynamics.platform.inertia");
  Eigen::SelfAdjointEigenSolver<Matrix3d> es(inertia);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw ConfigError("platform inertia must be positive definite",
                      "dynamics.platform.inertia");
}

Matrix3d skew(const Vector3d& v) {
  Matrix3d S;
  S << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return S;
}

Matrix3d euler_rate_to_world(double alpha, double beta) {
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const double sb = std::sin(beta), cb = std::cos(beta);
  Matrix3d E;
  // Columns: rotation axes of alpha, beta, gamma in the base frame.
  E.col(0) = Vector3d(0.0, 0.0, 1.0);
  E.col(1) = Vector3d(-sa, ca, 0.0);
  E.col(2) = Vector3d(ca * sb, sa * sb, cb);
  return E;
}

Matrix3d euler_rate_to_world_rate(double alpha, double beta, double alpha_dot,
                                  double beta_dot) {
  const double sa = std::sin(alpha), ca = std::cos(alpha);
  const double sb = std::sin(beta), cb = std::cos(beta);
  Matrix3d Ed = Matrix3d::Zero();
  Ed.col(1) = alpha_dot * Vector3d(-ca, -sa, 0.0);
  Ed.col(2) = Vector3d(-sa * sb * alpha_dot + ca * cb * beta_dot,
                       ca * sb * alpha_dot + sa * cb * beta_dot,
                       -sb * beta_dot);
  return Ed;
}

Matrix3d euler_rate_to_body(double alpha, double beta, double gamma) {
  (void)alpha;  // the body map depends on beta and gamma only
  const double sb = std::sin(beta), cb = std::cos(beta);
  const double sg = std::sin(gamma), cg = std::cos(gamma);
  Matrix3d T;
  T << -sb * cg, sg, 0.0,
        sb * sg, cg, 0.0,
        cb,      0.0, 1.0;
  return T;
}

Matrix3d euler_rate_to_body_rate(double alpha, double beta, double gamma,
                                 double alpha_dot, double beta_dot,
                                 double gamma_dot) {
  (void)alpha;
  (void)alpha_dot;
  const double sb = std::sin(beta), cb = std::cos(beta);
  const double sg = std::sin(gamma), cg = std::cos(gamma);
  Matrix3d Td;
  Td << -cb * beta_dot * cg + sb * sg * gamma_dot, cg * gamma_dot, 0.0,
         cb * beta_dot * sg + sb * cg * gamma_dot, -sg * gamma_dot, 0.0,
        -sb * beta_dot, 0.0, 0.0;
  return Td;
}

bool euler_map_near_singular(double beta, double tol) {
  return std::abs(std::sin(beta)) < tol;
}

LegKinematics leg_kinematics(const TaskState& state,
                             const PlatformGeometry& geom, int leg) {
  const Pose pose = state.pose();
  const Matrix3d R = euler_rotation(pose.alpha, pose.beta, pose.gamma);
  const Vector3d anchor_offset = R * platform_anchors_local(geom)[static_cast<size_t>(leg)];
  const Vector3d a = base_anchors(geom)[static_cast<size_t>(leg)];

  LegKinematics kin;
  kin.attach_point = pose.position() + anchor_offset;
  const Vector3d diff = kin.attach_point - a;
  kin.length = diff.norm();
  if (kin.length < 1e-9)
    throw SingularityError("leg length collapsed to zero", 0.0);
  kin.unit = diff / kin.length;

  const Vector3d w_platform =
      euler_rate_to_world(pose.alpha, pose.beta) * state.Xd.tail<3>();
  kin.attach_velocity = state.Xd.head<3>() + w_platform.cross(anchor_offset);
  kin.length_rate = kin.attach_velocity.dot(kin.unit);
  kin.angular_velocity = kin.unit.cross(kin.attach_velocity) / kin.length;
  return kin;
}

namespace {

struct LegTerms {
  Matrix3d I_sum;           // piston + stroke inertia
  double m1, c1, m2, c2;
};

Matrix3d leg_mass_at(const LegTerms& t, const Vector3d& s, double l) {
  const Matrix3d Ss = skew(s);
  const double k = t.m1 * t.c1 * t.c1 + t.m2 * (l - t.c2) * (l - t.c2);
  return (-Ss * t.I_sum * Ss) / (l * l) - (k / (l * l)) * (Ss * Ss) +
         t.m2 * (s * s.transpose());
}

// Directional derivative of the leg mass matrix along attachment motion v.
Matrix3d leg_mass_derivative(const LegTerms& t, const Vector3d& s, double l,
                             const Vector3d& v) {
  const Vector3d u = (v - s * (s.dot(v))) / l;  // d(s)/dt for xd = v
  const double dl = s.dot(v);
  const Matrix3d Ss = skew(s);
  const Matrix3d Su = skew(u);
  const double k = t.m1 * t.c1 * t.c1 + t.m2 * (l - t.c2) * (l - t.c2);
  const double dk = 2.0 * t.m2 * (l - t.c2) * dl;

  Matrix3d dM = (-(Su * t.I_sum * Ss + Ss * t.I_sum * Su)) / (l * l) +
                (2.0 * dl / (l * l * l)) * (Ss * t.I_sum * Ss);
  dM += -(dk / (l * l)) * (Ss * Ss) - (k / (l * l)) * (Su * Ss + Ss * Su) +
        (2.0 * dl / (l * l * l)) * k * (Ss * Ss);
  dM += t.m2 * (s * u.transpose() + u * s.transpose());
  return dM;
}

LegTerms terms_of(const ActuatorParams& p) {
  return {p.piston_inertia + p.stroke_inertia, p.piston_mass,
          p.piston_half_length, p.stroke_mass, p.stroke_half_length};
}

}  // namespace

LegMatrices actuator_matrices(const LegKinematics& kin,
                              const ActuatorParams& params,
                              const Vector3d& gravity) {
  const LegTerms t = terms_of(params);
  const Vector3d& s = kin.unit;
  const double l = kin.length;

  LegMatrices out;
  out.M = leg_mass_at(t, s, l);

  // Christoffel form: C = (dM[v] + W - W^T)/2 with W_j = dM[e_j] v.
  const Vector3d& v = kin.attach_velocity;
  const Matrix3d dM_v = leg_mass_derivative(t, s, l, v);
  Matrix3d W;
  for (int j = 0; j < 3; ++j)
    W.col(j) = leg_mass_derivative(t, s, l, Vector3d::Unit(j)) * v;
  out.C = 0.5 * (dM_v + W - W.transpose());

  // Exact gradient of the part potential energies w.r.t. the attachment
  // point; -gravity is the upward weight direction.
  const Matrix3d P_perp = Matrix3d::Identity() - s * s.transpose();
  out.G = (((t.m1 * t.c1 - t.m2 * t.c2) / l) * P_perp +
           t.m2 * Matrix3d::Identity()) *
          (-gravity);
  return out;
}

double leg_kinetic_energy_parts(const LegKinematics& kin,
                                const ActuatorParams& params) {
  const Vector3d& s = kin.unit;
  const Vector3d& w = kin.angular_velocity;
  const Vector3d v1 = params.piston_half_length * w.cross(s);
  const Vector3d v2 = kin.length_rate * s +
                      (kin.length - params.stroke_half_length) * w.cross(s);
  return 0.5 * params.piston_mass * v1.squaredNorm() +
         0.5 * params.stroke_mass * v2.squaredNorm() +
         0.5 * w.dot((params.piston_inertia + params.stroke_inertia) * w);
}

double leg_potential_energy(const LegKinematics& kin,
                            const ActuatorParams& params,
                            const Vector3d& gravity) {
  const double sz = kin.unit.z();
  const double height_term =
      params.piston_mass * params.piston_half_length * sz +
      params.stroke_mass * (kin.length - params.stroke_half_length) * sz;
  return -gravity.z() * height_term;
}

PlatformMatrices platform_matrices(const TaskState& state,
                                   const PlatformBody& body) {
  const double alpha = state.X[3], beta = state.X[4], gamma = state.X[5];
  const Matrix3d T = euler_rate_to_body(alpha, beta, gamma);
  const Matrix3d Td = euler_rate_to_body_rate(alpha, beta, gamma, state.Xd[3],
                                              state.Xd[4], state.Xd[5]);
  const Vector3d w_body = T * state.Xd.tail<3>();

  PlatformMatrices out;
  out.M.topLeftCorner<3, 3>() = body.mass * Matrix3d::Identity();
  out.M.bottomRightCorner<3, 3>() = T.transpose() * body.inertia * T;
  out.C.bottomRightCorner<3, 3>() =
      T.transpose() * body.inertia * Td +
      T.transpose() * skew(w_body) * body.inertia * T;
  out.G.head<3>() = -body.mass * body.gravity;
  return out;
}

Matrix36d leg_jacobian(const TaskState& state, const PlatformGeometry& geom,
                       int leg) {
  const Pose pose = state.pose();
  const Matrix3d R = euler_rotation(pose.alpha, pose.beta, pose.gamma);
  const Vector3d B = R * platform_anchors_local(geom)[static_cast<size_t>(leg)];
  Matrix36d J;
  J.leftCols<3>() = Matrix3d::Identity();
  J.rightCols<3>() = -skew(B) * euler_rate_to_world(pose.alpha, pose.beta);
  return J;
}

Matrix36d leg_jacobian_rate(const TaskState& state,
                            const PlatformGeometry& geom, int leg) {
  const Pose pose = state.pose();
  const Matrix3d R = euler_rotation(pose.alpha, pose.beta, pose.gamma);
  const Vector3d B = R * platform_anchors_local(geom)[static_cast<size_t>(leg)];
  const Matrix3d E = euler_rate_to_world(pose.alpha, pose.beta);
  const Matrix3d Ed = euler_rate_to_world_rate(pose.alpha, pose.beta,
                                               state.Xd[3], state.Xd[4]);
  const Vector3d w = E * state.Xd.tail<3>();
  const Vector3d Bd = w.cross(B);
  Matrix36d Jd = Matrix36d::Zero();
  Jd.rightCols<3>() = -skew(Bd) * E - skew(B) * Ed;
  return Jd;
}

DynamicsMatrices assemble(const TaskState& state, const SystemModel& model) {
  const PlatformMatrices plat = platform_matrices(state, model.body);
  DynamicsMatrices out;
  out.M = plat.M;
  out.C = plat.C;
  out.G = plat.G;

  for (int i = 0; i < 3; ++i) {
    const LegKinematics kin = leg_kinematics(state, model.geometry, i);
    const LegMatrices leg = actuator_matrices(
        kin, model.actuators[static_cast<size_t>(i)], model.body.gravity);
    const Matrix36d J = leg_jacobian(state, model.geometry, i);
    out.M += J.transpose() * leg.M * J;
    out.G += J.transpose() * leg.G;
    if (model.coriolis == CoriolisModel::kConsistent) {
      const Matrix36d Jd = leg_jacobian_rate(state, model.geometry, i);
      out.C += J.transpose() * leg.M * Jd + J.transpose() * leg.C * J;
    } else {
      out.C += J.transpose() * leg.M * J + J.transpose() * leg.C * J;
    }
  }

  // Cheap conditioning probe on the (scale-inhomogeneous) mass matrix.
  Eigen::SelfAdjointEigenSolver<Matrix6d> es(out.M);
  const double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
  const double lmin = es.eigenvalues().minCoeff();
  out.rcond_estimate = lmax > 0.0 ? lmin / lmax : 0.0;
  out.conditioning_warning = !(out.rcond_estimate > 1e-10);
  return out;
}

Vector6d inverse_dynamics(const TaskState& state, const SystemModel& model) {
  const DynamicsMatrices dyn = assemble(state, model);
  return dyn.M * state.Xdd + dyn.C * state.Xd + dyn.G;
}

Vector6d forward_dynamics(const TaskState& state, const Vector6d& force,
                          const SystemModel& model) {
  const DynamicsMatrices dyn = assemble(state, model);
  if (dyn.conditioning_warning)
    throw SingularityError(
        "mass matrix is singular on the full task space at this state",
        dyn.rcond_estimate);
  const Vector6d rhs = force - dyn.C * state.Xd - dyn.G;
  const Vector6d xdd = dyn.M.ldlt().solve(rhs);
  const double residual = (dyn.M * xdd - rhs).norm();
  if (!(residual < 1e-9 * std::max(1.0, force.norm())))
    throw SingularityError("forward dynamics solve missed its tolerance",
                           dyn.rcond_estimate);
  return xdd;
}

double total_energy(const TaskState& state, const SystemModel& model) {
  const double alpha = state.X[3], beta = state.X[4], gamma = state.X[5];
  const Matrix3d T = euler_rate_to_body(alpha, beta, gamma);
  const Vector3d w_body = T * state.Xd.tail<3>();
  double energy = 0.5 * model.body.mass * state.Xd.head<3>().squaredNorm() +
                  0.5 * w_body.dot(model.body.inertia * w_body) -
                  model.body.mass * model.body.gravity.z() * state.X[2];
  for (int i = 0; i < 3; ++i) {
    const LegKinematics kin = leg_kinematics(state, model.geometry, i);
    const auto& params = model.actuators[static_cast<size_t>(i)];
    energy += leg_kinetic_energy_parts(kin, params);
    energy += leg_potential_energy(kin, params, model.body.gravity);
  }
  return energy;
}

}  // namespace bplat

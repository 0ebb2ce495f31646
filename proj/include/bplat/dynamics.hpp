#pragma once

#include <Eigen/Dense>
#include <array>

#include "bplat/geometry.hpp"

// Rigid-body dynamics of the platform and its three linear actuators,
// assembled into the task-space model M(X) Xdd + C(X, Xd) Xd + G(X) = F with
// X = [x y z alpha beta gamma].
//
// Each actuator is a piston (fixed to the base joint) plus a sliding stroke;
// leg motion is described by the unit vector s_i from base anchor to
// attachment point.  Leg terms are derived from the part kinetic/potential
// energies, so the mass matrix reproduces those energies exactly and the
// gravity vector is the exact potential gradient.  The leg Coriolis matrix
// comes from the Christoffel symbols of the leg mass matrix, which keeps
// dM/dt - 2C skew-symmetric and the power balance closed.

namespace bplat {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;
using Matrix36d = Eigen::Matrix<double, 3, 6>;

struct ActuatorParams {
  double piston_mass = 1.2;         // [kg]
  double piston_half_length = 0.12; // [m], joint to piston center
  double stroke_mass = 0.6;         // [kg]
  double stroke_half_length = 0.08; // [m], tip to stroke center
  // Combined part inertias about their centers [kg m^2].  Constant tensors;
  // exact for transversely isotropic (rod-like) parts, which never spin
  // about their own axis here.
  Matrix3d piston_inertia = 0.00576 * Matrix3d::Identity();
  Matrix3d stroke_inertia = 0.00128 * Matrix3d::Identity();

  void validate() const;
};

struct PlatformBody {
  double mass = 8.0;                                      // [kg]
  Matrix3d inertia =
      Eigen::Vector3d(0.15, 0.15, 0.3).asDiagonal();      // body frame
  Vector3d gravity = Vector3d(0.0, 0.0, -9.8);            // [m/s^2]

  void validate() const;
};

struct TaskState {
  Vector6d X = Vector6d::Zero();    // [x y z alpha beta gamma]
  Vector6d Xd = Vector6d::Zero();
  Vector6d Xdd = Vector6d::Zero();

  Pose pose() const {
    Pose p;
    p.x = X[0]; p.y = X[1]; p.z = X[2];
    p.alpha = X[3]; p.beta = X[4]; p.gamma = X[5];
    return p;
  }
  static TaskState from_pose(const Pose& p) {
    TaskState s;
    s.X << p.x, p.y, p.z, p.alpha, p.beta, p.gamma;
    return s;
  }
};

struct DynamicsMatrices {
  Matrix6d M = Matrix6d::Zero();
  Matrix6d C = Matrix6d::Zero();
  Vector6d G = Vector6d::Zero();
  bool conditioning_warning = false;  // set when M is near singular
  double rcond_estimate = 0.0;
};

// S(v) w = v x w; S(v)^T = -S(v).
Matrix3d skew(const Vector3d& v);

// Euler-rate maps for the ZYZ convention.  euler_rate_to_world gives the
// spatial angular velocity, euler_rate_to_body the body-frame one
// (w_body = R^T w_world).  Both lose rank at sin(beta) = 0, where the alpha
// and gamma axes align; rate-to-velocity mapping stays well defined, only
// the inverse map does not exist there.
Matrix3d euler_rate_to_world(double alpha, double beta);
Matrix3d euler_rate_to_world_rate(double alpha, double beta, double alpha_dot,
                                  double beta_dot);
Matrix3d euler_rate_to_body(double alpha, double beta, double gamma);
Matrix3d euler_rate_to_body_rate(double alpha, double beta, double gamma,
                                 double alpha_dot, double beta_dot,
                                 double gamma_dot);
bool euler_map_near_singular(double beta, double tol = 1e-6);

struct LegKinematics {
  Vector3d unit;              // s_i, base anchor toward attachment
  Vector3d attach_point;      // x_i in the base frame
  Vector3d attach_velocity;   // xd_i
  Vector3d angular_velocity;  // w_i of the leg
  double length = 0.0;
  double length_rate = 0.0;
};

// Leg state from the platform task state.  Throws SingularityError when the
// leg length collapses to zero.
LegKinematics leg_kinematics(const TaskState& state,
                             const PlatformGeometry& geom, int leg);

struct LegMatrices {
  Matrix3d M = Matrix3d::Zero();
  Matrix3d C = Matrix3d::Zero();
  Vector3d G = Vector3d::Zero();
};

// Leg mass, Coriolis, and gravity terms in attachment-point coordinates.
LegMatrices actuator_matrices(const LegKinematics& kin,
                              const ActuatorParams& params,
                              const Vector3d& gravity);

// Kinetic energy of one leg for a given attachment velocity; independent
// route through the part velocities, used to cross-check the mass matrix.
double leg_kinetic_energy_parts(const LegKinematics& kin,
                                const ActuatorParams& params);
double leg_potential_energy(const LegKinematics& kin,
                            const ActuatorParams& params,
                            const Vector3d& gravity);

struct PlatformMatrices {
  Matrix6d M = Matrix6d::Zero();
  Matrix6d C = Matrix6d::Zero();
  Vector6d G = Vector6d::Zero();
};

PlatformMatrices platform_matrices(const TaskState& state,
                                   const PlatformBody& body);

// J_i maps task velocity to attachment velocity: xd_i = [I | -S(B_i) E] Xd
// with B_i the world-frame anchor offset and E the world Euler-rate map.
Matrix36d leg_jacobian(const TaskState& state, const PlatformGeometry& geom,
                       int leg);
Matrix36d leg_jacobian_rate(const TaskState& state,
                            const PlatformGeometry& geom, int leg);

// Variant of the assembled velocity coupling.  kConsistent uses the
// J^T M Jdot term that follows from differentiating xd_i = J_i Xd;
// kStaticJacobian reuses J in its place (coarser, kept for comparison).
enum class CoriolisModel { kConsistent, kStaticJacobian };

struct SystemModel {
  PlatformGeometry geometry;
  PlatformBody body;
  std::array<ActuatorParams, 3> actuators{};
  CoriolisModel coriolis = CoriolisModel::kConsistent;
};

DynamicsMatrices assemble(const TaskState& state, const SystemModel& model);

// F = M Xdd + C Xd + G for the motion stored in the state.
Vector6d inverse_dynamics(const TaskState& state, const SystemModel& model);

// Solves M Xdd = F - C Xd - G.  Throws SingularityError with the condition
// estimate when M is not invertible (e.g. exactly level poses, where the
// tilt-direction coordinate is a gauge freedom).
Vector6d forward_dynamics(const TaskState& state, const Vector6d& force,
                          const SystemModel& model);

// Total kinetic + potential energy of platform and legs.
double total_energy(const TaskState& state, const SystemModel& model);

}  // namespace bplat

#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "bplat/errors.hpp"
#include "bplat/units.hpp"

// Kinematics of a 3-DOF parallel platform driven by three linear actuators.
//
// Three base anchors A1..A3 sit on a circle of radius R at 0/120/240 degrees;
// the matching platform anchors b1..b3 sit on a circle of radius r in the
// moving frame.  Each leg is mechanically confined to the vertical plane
// through the base center and its own anchor (y=0, y=-sqrt(3)x, y=sqrt(3)x),
// which removes three of the six rigid-body freedoms.
//
// Orientation uses Z-Y-Z Euler angles (alpha, beta, gamma): R =
// Rz(alpha)*Ry(beta)*Rz(gamma).  On the constraint manifold gamma = -alpha,
// so the rotation is a pure tilt by beta about the horizontal axis
// (-sin(alpha), cos(alpha), 0); alpha aims the tilt, beta is its magnitude,
// and the platform never yaws.  The leg-plane constraints then fix the
// horizontal position of the platform center, leaving (alpha, beta, z) as the
// three independent coordinates.

namespace bplat {

using Eigen::Matrix3d;
using Eigen::Matrix4d;
using Eigen::Vector3d;

struct PlatformGeometry {
  double base_radius = 0.30;      // R [m]
  double platform_radius = 0.25;  // r [m]
  double mount_angle = deg2rad(70.0);   // actuator inclination vs base [rad]
  double stroke_max = 0.20;             // actuator travel [m]
  double joint_limit = deg2rad(18.0);   // max platform tilt [rad]
  double actuator_min_length = 0.35;    // fully retracted length [m]

  // Throws ConfigError if any invariant (positive lengths, mount angle in
  // (0, pi/2)) is violated.
  void validate() const;
};

struct Pose {
  double x = 0.0;  // platform center in base frame [m]
  double y = 0.0;
  double z = 0.0;
  double alpha = 0.0;  // ZYZ Euler angles [rad]
  double beta = 0.0;
  double gamma = 0.0;

  Vector3d position() const { return {x, y, z}; }
};

struct LegLengths {
  std::array<double, 3> values{};
  double operator[](int i) const { return values[static_cast<size_t>(i)]; }
  double& operator[](int i) { return values[static_cast<size_t>(i)]; }
};

struct AnchorSet {
  std::array<Vector3d, 3> base;            // A1..A3
  std::array<Vector3d, 3> platform_local;  // b1..b3 in the moving frame
  std::array<Vector3d, 3> platform_world;  // B1..B3 in the base frame
};

// Base anchors A1=(R,0,0), A2=(-R/2, sqrt(3)R/2, 0), A3=(-R/2, -sqrt(3)R/2, 0).
std::array<Vector3d, 3> base_anchors(const PlatformGeometry& geom);

// Platform anchors in the moving frame (same pattern at radius r).
std::array<Vector3d, 3> platform_anchors_local(const PlatformGeometry& geom);

// Rotation for ZYZ angles: Rz(alpha)*Ry(beta)*Rz(gamma).
Matrix3d euler_rotation(double alpha, double beta, double gamma);

// Zero-torsion rotation (gamma = -alpha): tilt by beta about
// (-sin(alpha), cos(alpha), 0).
Matrix3d tilt_rotation(double alpha, double beta);

// Homogeneous transform of a pose: rotation block from euler_rotation plus
// the (x, y, z) translation.
Matrix4d pose_transform(const Pose& pose);

// Platform anchors mapped to the base frame: B_i = R*b_i + (x, y, z).
std::array<Vector3d, 3> platform_anchors_world(const Pose& pose,
                                               const PlatformGeometry& geom);

AnchorSet anchor_set(const Pose& pose, const PlatformGeometry& geom);

// Signed distances of B1..B3 from their leg planes
// (y=0, y=-sqrt(3)x, y=sqrt(3)x).  Zero for a constraint-resolved pose.
std::array<double, 3> leg_plane_residuals(const Pose& pose,
                                          const PlatformGeometry& geom);

// Completes (alpha, beta, z) to a full pose on the constraint manifold:
// gamma = -alpha, and the horizontal center position that puts every anchor
// on its leg plane:
//   x = -r*(1-cos(beta))*cos(2*alpha)/2
//   y =  r*(1-cos(beta))*sin(2*alpha)/2
// Throws WorkspaceError if |beta| exceeds the tilt limit or z <= 0.
Pose resolve_constraints(double alpha, double beta, double z,
                         const PlatformGeometry& geom);

// Leg lengths L_i = |B_i - A_i| with no travel check.
LegLengths leg_lengths(const Pose& pose, const PlatformGeometry& geom);

// Leg lengths with actuator travel validation; throws WorkspaceError if any
// length leaves [min_length, min_length + stroke].
LegLengths inverse_kinematics(const Pose& pose, const PlatformGeometry& geom);

// Sensitivity of the three leg lengths to the reduced coordinates
// q = (alpha, beta, z); rows are legs, columns are coordinates.
Matrix3d reduced_leg_jacobian(double alpha, double beta, double z,
                              const PlatformGeometry& geom);

// Solves leg lengths back to a constrained pose with a damped Newton
// iteration on (alpha, beta, z) (analytic Jacobian, tol 1e-10, 50 iterations,
// step halving when the residual does not decrease).  Throws
// ConvergenceError with the final residual norm when the lengths are not
// realizable.  At zero tilt the tilt direction alpha is indeterminate; the
// solver reports alpha = 0 there.
Pose forward_kinematics(const LegLengths& lengths,
                        const PlatformGeometry& geom,
                        const Pose& initial_guess);

Pose forward_kinematics(const LegLengths& lengths,
                        const PlatformGeometry& geom);

// Pose of the reduced coordinates as the 6-vector [x y z alpha beta gamma],
// plus the 6x3 tangent map E = dX/dq and its time derivative.  These carry
// reduced-coordinate motions into task space (Xdot = E qdot).
Eigen::Matrix<double, 6, 1> embed_reduced(const Vector3d& q,
                                          const PlatformGeometry& geom);
Eigen::Matrix<double, 6, 3> constraint_embedding(const Vector3d& q,
                                                 const PlatformGeometry& geom);
Eigen::Matrix<double, 6, 3> constraint_embedding_rate(
    const Vector3d& q, const Vector3d& qd, const PlatformGeometry& geom);

// Fixed-inclination estimate of the actuator tips and platform center: each
// leg is assumed to keep its mount inclination theta_i, so tip_i moves from
// A_i along a straight rail at that angle and the center is the tip average.
// Exact centers come from pose_transform; this estimate is kept because it
// matches the original design sheets.
struct ActuatorEstimate {
  std::array<Vector3d, 3> tips;
  Vector3d center;
};
ActuatorEstimate actuator_tip_and_center(const LegLengths& lengths,
                                         const std::array<double, 3>& mount_angles,
                                         const PlatformGeometry& geom);

// Ankle range-of-motion limits [rad], applied to the tilt decomposed into
// rotations about x (inversion/eversion) and y (plantar/dorsiflexion).
// Signs: +y tilt drops the +x edge (plantar flexion), +x tilt drops the
// -y edge (inversion).
struct RomTable {
  double plantarflexion = deg2rad(50.0);  // tilt about +y
  double dorsiflexion = deg2rad(20.0);    // tilt about -y
  double inversion = deg2rad(35.0);       // tilt about +x
  double eversion = deg2rad(20.0);        // tilt about -x
  double adduction = deg2rad(10.0);       // yaw, structurally zero here
  double abduction = deg2rad(5.0);
};

struct WorkspaceReport {
  bool pass = true;
  std::vector<std::string> violations;
  double tilt = 0.0;                          // |beta| [rad]
  double tilt_about_x = 0.0;                  // rotation-vector components
  double tilt_about_y = 0.0;
  std::array<double, 3> joint_angle{};        // leg axis vs platform normal
  std::array<double, 3> joint_deviation{};    // swing vs level pose at same z
  std::array<double, 3> stroke_usage{};       // 0..1 of available travel
};

// Report-only check of a pose against tilt limit, stroke travel, and the
// ankle ROM table.  Never throws.
WorkspaceReport workspace_check(const Pose& pose, const PlatformGeometry& geom,
                                const RomTable& rom = RomTable{});

}  // namespace bplat

#include "bplat/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace bplat {

namespace {
const double kSqrt3 = std::sqrt(3.0);

std::string fmt_rad_as_deg(double rad) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f deg", rad2deg(rad));
  return buf;
}
}  // namespace

void PlatformGeometry::validate() const {
  if (!(base_radius > 0.0)) throw ConfigError("base_radius must be > 0", "geometry.base_radius_m");
  if (!(platform_radius > 0.0))
    throw ConfigError("platform_radius must be > 0", "geometry.platform_radius_m");
  if (!(mount_angle > 0.0 && mount_angle < kPi / 2.0))
    throw ConfigError("mount_angle must be in (0, 90) deg", "geometry.mount_angle_deg");
  if (!(stroke_max > 0.0)) throw ConfigError("stroke must be > 0", "geometry.stroke_m");
  if (!(actuator_min_length > 0.0))
    throw ConfigError("min_length must be > 0", "geometry.min_length_m");
  if (!(joint_limit > 0.0 && joint_limit < kPi / 2.0))
    throw ConfigError("joint_limit must be in (0, 90) deg", "geometry.joint_limit_deg");
}

std::array<Vector3d, 3> base_anchors(const PlatformGeometry& geom) {
  const double R = geom.base_radius;
  return {Vector3d(R, 0.0, 0.0), Vector3d(-R / 2.0, kSqrt3 * R / 2.0, 0.0),
          Vector3d(-R / 2.0, -kSqrt3 * R / 2.0, 0.0)};
}

std::array<Vector3d, 3> platform_anchors_local(const PlatformGeometry& geom) {
  const double r = geom.platform_radius;
  return {Vector3d(r, 0.0, 0.0), Vector3d(-r / 2.0, kSqrt3 * r / 2.0, 0.0),
          Vector3d(-r / 2.0, -kSqrt3 * r / 2.0, 0.0)};
}

Matrix3d euler_rotation(double alpha, double beta, double gamma) {
  return (Eigen::AngleAxisd(alpha, Vector3d::UnitZ()) *
          Eigen::AngleAxisd(beta, Vector3d::UnitY()) *
          Eigen::AngleAxisd(gamma, Vector3d::UnitZ()))
      .toRotationMatrix();
}

Matrix3d tilt_rotation(double alpha, double beta) {
  return euler_rotation(alpha, beta, -alpha);
}

Matrix4d pose_transform(const Pose& pose) {
  Matrix4d T = Matrix4d::Identity();
  T.topLeftCorner<3, 3>() = euler_rotation(pose.alpha, pose.beta, pose.gamma);
  T.topRightCorner<3, 1>() = pose.position();
  return T;
}

std::array<Vector3d, 3> platform_anchors_world(const Pose& pose,
                                               const PlatformGeometry& geom) {
  const Matrix3d R = euler_rotation(pose.alpha, pose.beta, pose.gamma);
  const Vector3d p = pose.position();
  const auto local = platform_anchors_local(geom);
  return {R * local[0] + p, R * local[1] + p, R * local[2] + p};
}

AnchorSet anchor_set(const Pose& pose, const PlatformGeometry& geom) {
  return {base_anchors(geom), platform_anchors_local(geom),
          platform_anchors_world(pose, geom)};
}

std::array<double, 3> leg_plane_residuals(const Pose& pose,
                                          const PlatformGeometry& geom) {
  const auto B = platform_anchors_world(pose, geom);
  // Signed plane distances, normalized to unit normals.
  return {B[0].y(), (B[1].y() + kSqrt3 * B[1].x()) / 2.0,
          (B[2].y() - kSqrt3 * B[2].x()) / 2.0};
}

Pose resolve_constraints(double alpha, double beta, double z,
                         const PlatformGeometry& geom) {
  if (std::abs(beta) > geom.joint_limit + 1e-12)
    throw WorkspaceError("tilt " + fmt_rad_as_deg(std::abs(beta)) +
                         " exceeds the " + fmt_rad_as_deg(geom.joint_limit) +
                         " limit");
  if (!(z > 0.0)) throw WorkspaceError("platform height must be positive");

  const double r = geom.platform_radius;
  const double lift = 1.0 - std::cos(beta);
  Pose pose;
  pose.alpha = alpha;
  pose.beta = beta;
  pose.gamma = -alpha;
  pose.x = -r * lift * std::cos(2.0 * alpha) / 2.0;
  pose.y = r * lift * std::sin(2.0 * alpha) / 2.0;
  pose.z = z;
  return pose;
}

LegLengths leg_lengths(const Pose& pose, const PlatformGeometry& geom) {
  const auto A = base_anchors(geom);
  const auto B = platform_anchors_world(pose, geom);
  LegLengths out;
  for (int i = 0; i < 3; ++i) out[i] = (B[i] - A[i]).norm();
  return out;
}

LegLengths inverse_kinematics(const Pose& pose, const PlatformGeometry& geom) {
  const LegLengths lengths = leg_lengths(pose, geom);
  const double lo = geom.actuator_min_length;
  const double hi = geom.actuator_min_length + geom.stroke_max;
  for (int i = 0; i < 3; ++i) {
    if (lengths[i] < lo - 1e-9 || lengths[i] > hi + 1e-9) {
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "leg %d length %.6f m outside actuator travel [%.3f, %.3f] m",
                    i + 1, lengths[i], lo, hi);
      throw WorkspaceError(buf);
    }
  }
  return lengths;
}

namespace {

// d(tilt_rotation)/dalpha = S(z)R - R S(z); d/dbeta = S(u)R with
// u = (-sin(alpha), cos(alpha), 0).
Matrix3d skew3(const Vector3d& v) {
  Matrix3d S;
  S << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return S;
}

struct CenterDerivs {
  Vector3d dp_dalpha;
  Vector3d dp_dbeta;
};

CenterDerivs center_derivs(double alpha, double beta, double r) {
  const double lift = 1.0 - std::cos(beta);
  const double s2a = std::sin(2.0 * alpha), c2a = std::cos(2.0 * alpha);
  return {Vector3d(r * lift * s2a, r * lift * c2a, 0.0),
          Vector3d(-r * std::sin(beta) * c2a / 2.0,
                   r * std::sin(beta) * s2a / 2.0, 0.0)};
}

}  // namespace

Matrix3d reduced_leg_jacobian(double alpha, double beta, double z,
                              const PlatformGeometry& geom) {
  const Matrix3d R = tilt_rotation(alpha, beta);
  const Vector3d u(-std::sin(alpha), std::cos(alpha), 0.0);
  const Matrix3d Sz = skew3(Vector3d::UnitZ());
  const Matrix3d dR_da = Sz * R - R * Sz;
  const Matrix3d dR_db = skew3(u) * R;
  const auto derivs = center_derivs(alpha, beta, geom.platform_radius);

  const double lift = 1.0 - std::cos(beta);
  const Vector3d p(-geom.platform_radius * lift * std::cos(2.0 * alpha) / 2.0,
                   geom.platform_radius * lift * std::sin(2.0 * alpha) / 2.0,
                   z);
  const auto A = base_anchors(geom);
  const auto b = platform_anchors_local(geom);

  Matrix3d J;
  for (int i = 0; i < 3; ++i) {
    const Vector3d Bw = R * b[i] + p;
    const Vector3d diff = Bw - A[i];
    const double len = diff.norm();
    const Vector3d s = diff / len;
    J(i, 0) = s.dot(derivs.dp_dalpha + dR_da * b[i]);
    J(i, 1) = s.dot(derivs.dp_dbeta + dR_db * b[i]);
    J(i, 2) = s.z();
  }
  return J;
}

Pose forward_kinematics(const LegLengths& lengths,
                        const PlatformGeometry& geom) {
  // Level-pose guess at the height implied by the mean length.
  const double mean =
      (lengths[0] + lengths[1] + lengths[2]) / 3.0;
  const double dr = geom.base_radius - geom.platform_radius;
  const double z0 = std::sqrt(std::max(mean * mean - dr * dr, 1e-6));
  Pose guess;
  guess.z = z0;
  return forward_kinematics(lengths, geom, guess);
}

Pose forward_kinematics(const LegLengths& lengths, const PlatformGeometry& geom,
                        const Pose& initial_guess) {
  constexpr int kMaxIters = 50;
  constexpr double kTol = 1e-10;

  Vector3d q(initial_guess.alpha, initial_guess.beta,
             initial_guess.z > 0.0 ? initial_guess.z : 0.3);
  const Vector3d target(lengths[0], lengths[1], lengths[2]);

  auto residual_of = [&](const Vector3d& qv) -> Vector3d {
    Pose p = resolve_constraints(qv[0], qv[1], qv[2], geom);
    const LegLengths cur = leg_lengths(p, geom);
    return Vector3d(cur[0], cur[1], cur[2]) - target;
  };

  Vector3d res = residual_of(q);
  double res_norm = res.lpNorm<Eigen::Infinity>();
  for (int iter = 0; iter < kMaxIters; ++iter) {
    if (res_norm < kTol) {
      // Canonicalize the indeterminate tilt direction at zero tilt.
      if (std::abs(q[1]) < 1e-12) q[0] = 0.0;
      return resolve_constraints(q[0], q[1], q[2], geom);
    }
    const Matrix3d J = reduced_leg_jacobian(q[0], q[1], q[2], geom);
    // Rank-revealing solve: the alpha column vanishes at zero tilt.
    Eigen::CompleteOrthogonalDecomposition<Matrix3d> cod(J);
    const Vector3d step = cod.solve(-res);

    // Halve the step until the residual decreases.
    double lambda = 1.0;
    bool improved = false;
    for (int k = 0; k < 12; ++k) {
      Vector3d q_try = q + lambda * step;
      q_try[1] = std::clamp(q_try[1], -geom.joint_limit, geom.joint_limit);
      q_try[2] = std::max(q_try[2], 1e-4);
      const Vector3d res_try = residual_of(q_try);
      const double norm_try = res_try.lpNorm<Eigen::Infinity>();
      if (norm_try < res_norm) {
        q = q_try;
        res = res_try;
        res_norm = norm_try;
        improved = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!improved)
      throw ConvergenceError("forward kinematics stalled; lengths not realizable",
                             res_norm, iter + 1);
  }
  if (res_norm < kTol) {
    if (std::abs(q[1]) < 1e-12) q[0] = 0.0;
    return resolve_constraints(q[0], q[1], q[2], geom);
  }
  throw ConvergenceError("forward kinematics did not converge", res_norm,
                         kMaxIters);
}

Eigen::Matrix<double, 6, 1> embed_reduced(const Vector3d& q,
                                          const PlatformGeometry& geom) {
  const Pose p = resolve_constraints(q[0], q[1], q[2], geom);
  Eigen::Matrix<double, 6, 1> X;
  X << p.x, p.y, p.z, p.alpha, p.beta, p.gamma;
  return X;
}

Eigen::Matrix<double, 6, 3> constraint_embedding(const Vector3d& q,
                                                 const PlatformGeometry& geom) {
  const auto derivs = center_derivs(q[0], q[1], geom.platform_radius);
  Eigen::Matrix<double, 6, 3> E = Eigen::Matrix<double, 6, 3>::Zero();
  E.block<3, 1>(0, 0) = derivs.dp_dalpha;
  E.block<3, 1>(0, 1) = derivs.dp_dbeta;
  E(2, 2) = 1.0;
  E(3, 0) = 1.0;   // alpha
  E(4, 1) = 1.0;   // beta
  E(5, 0) = -1.0;  // gamma = -alpha
  return E;
}

Eigen::Matrix<double, 6, 3> constraint_embedding_rate(
    const Vector3d& q, const Vector3d& qd, const PlatformGeometry& geom) {
  const double r = geom.platform_radius;
  const double a = q[0], b = q[1];
  const double ad = qd[0], bd = qd[1];
  const double s2a = std::sin(2.0 * a), c2a = std::cos(2.0 * a);
  const double sb = std::sin(b), cb = std::cos(b);

  Eigen::Matrix<double, 6, 3> Ed = Eigen::Matrix<double, 6, 3>::Zero();
  Ed.block<3, 1>(0, 0) =
      Vector3d(r * (sb * bd * s2a + (1.0 - cb) * 2.0 * c2a * ad),
               r * (sb * bd * c2a - (1.0 - cb) * 2.0 * s2a * ad), 0.0);
  Ed.block<3, 1>(0, 1) =
      Vector3d(-r / 2.0 * (cb * bd * c2a - 2.0 * sb * s2a * ad),
               r / 2.0 * (cb * bd * s2a + 2.0 * sb * c2a * ad), 0.0);
  return Ed;
}

ActuatorEstimate actuator_tip_and_center(
    const LegLengths& lengths, const std::array<double, 3>& mount_angles,
    const PlatformGeometry& geom) {
  const double R = geom.base_radius;
  ActuatorEstimate out;
  const double c1 = std::cos(mount_angles[0]), s1 = std::sin(mount_angles[0]);
  const double c2 = std::cos(mount_angles[1]), s2 = std::sin(mount_angles[1]);
  const double c3 = std::cos(mount_angles[2]), s3 = std::sin(mount_angles[2]);
  out.tips[0] = Vector3d(R - lengths[0] * c1, 0.0, lengths[0] * s1);
  out.tips[1] = Vector3d((-R + lengths[1] * c2) / 2.0,
                         kSqrt3 * (R - lengths[1] * c2) / 2.0, lengths[1] * s2);
  out.tips[2] = Vector3d((-R + lengths[2] * c3) / 2.0,
                         kSqrt3 * (-R + lengths[2] * c3) / 2.0, lengths[2] * s3);
  out.center = (out.tips[0] + out.tips[1] + out.tips[2]) / 3.0;
  return out;
}

WorkspaceReport workspace_check(const Pose& pose, const PlatformGeometry& geom,
                                const RomTable& rom) {
  WorkspaceReport rep;
  rep.tilt = std::abs(pose.beta);
  // Tilt decomposed as a rotation vector about the horizontal axes.
  rep.tilt_about_x = -pose.beta * std::sin(pose.alpha);
  rep.tilt_about_y = pose.beta * std::cos(pose.alpha);

  auto flag = [&rep](const std::string& msg) {
    rep.pass = false;
    rep.violations.push_back(msg);
  };

  if (rep.tilt > geom.joint_limit + 1e-12)
    flag("tilt " + fmt_rad_as_deg(rep.tilt) + " exceeds joint limit " +
         fmt_rad_as_deg(geom.joint_limit));
  if (rep.tilt_about_y > rom.plantarflexion + 1e-12)
    flag("plantar flexion beyond ROM (" + fmt_rad_as_deg(rep.tilt_about_y) + ")");
  if (-rep.tilt_about_y > rom.dorsiflexion + 1e-12)
    flag("dorsiflexion beyond ROM (" + fmt_rad_as_deg(-rep.tilt_about_y) + ")");
  if (rep.tilt_about_x > rom.inversion + 1e-12)
    flag("inversion beyond ROM (" + fmt_rad_as_deg(rep.tilt_about_x) + ")");
  if (-rep.tilt_about_x > rom.eversion + 1e-12)
    flag("eversion beyond ROM (" + fmt_rad_as_deg(-rep.tilt_about_x) + ")");

  const auto A = base_anchors(geom);
  const auto B = platform_anchors_world(pose, geom);
  const Matrix3d R = euler_rotation(pose.alpha, pose.beta, pose.gamma);
  const Vector3d normal = R.col(2);

  // Level reference at the same height, for the joint-swing measure.
  Pose level;
  level.z = pose.z;
  const auto B_level = platform_anchors_world(level, geom);

  for (int i = 0; i < 3; ++i) {
    const Vector3d s = (B[i] - A[i]).normalized();
    rep.joint_angle[i] = std::acos(std::clamp(s.dot(normal), -1.0, 1.0));
    const Vector3d s_platform = R.transpose() * s;
    const Vector3d s_ref = (B_level[i] - A[i]).normalized();
    rep.joint_deviation[i] =
        std::acos(std::clamp(s_platform.dot(s_ref), -1.0, 1.0));

    const double len = (B[i] - A[i]).norm();
    rep.stroke_usage[i] = (len - geom.actuator_min_length) / geom.stroke_max;
    if (rep.stroke_usage[i] < -1e-9 || rep.stroke_usage[i] > 1.0 + 1e-9) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "leg %d stroke usage %.3f outside [0, 1]",
                    i + 1, rep.stroke_usage[i]);
      flag(buf);
    }
  }
  return rep;
}

}  // namespace bplat

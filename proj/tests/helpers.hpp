#pragma once

#include <random>

#include "bplat/geometry.hpp"

namespace bplat::testing {

// Deterministic draw of a constrained pose in the interior of the workspace.
// Tilt stays >= 0.5 deg so the tilt direction is well conditioned.
struct PoseSampler {
  explicit PoseSampler(uint64_t seed) : rng(seed) {}

  Vector3d reduced(const PlatformGeometry& geom) {
    std::uniform_real_distribution<double> u_alpha(-kPi, kPi);
    std::uniform_real_distribution<double> u_beta(deg2rad(0.5),
                                                  rad2deg(geom.joint_limit) >= 18.0
                                                      ? deg2rad(18.0)
                                                      : geom.joint_limit);
    std::uniform_real_distribution<double> u_z(0.40, 0.50);
    for (int tries = 0; tries < 100; ++tries) {
      Vector3d q(u_alpha(rng), u_beta(rng), u_z(rng));
      Pose p = resolve_constraints(q[0], q[1], q[2], geom);
      const LegLengths lens = leg_lengths(p, geom);
      bool ok = true;
      for (int i = 0; i < 3; ++i)
        ok = ok && lens[i] >= geom.actuator_min_length &&
             lens[i] <= geom.actuator_min_length + geom.stroke_max;
      if (ok) return q;
    }
    return Vector3d(0.0, deg2rad(5.0), 0.45);
  }

  Pose pose(const PlatformGeometry& geom) {
    const Vector3d q = reduced(geom);
    return resolve_constraints(q[0], q[1], q[2], geom);
  }

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  }

  std::mt19937_64 rng;
};

}  // namespace bplat::testing

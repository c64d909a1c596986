#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace hybridsense {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;

// Rigid transform. Convention: +y is up, a head or device looks along its local -z,
// and a panel or label faces along its local +z.
struct Pose {
  Vec3 position = Vec3::Zero();
  Quat orientation = Quat::Identity();

  static Pose identity() { return {}; }

  Vec3 apply(const Vec3& local) const { return position + orientation * local; }
  Vec3 forward() const { return orientation * Vec3(0.0, 0.0, -1.0); }

  Pose compose(const Pose& rhs) const {
    Pose out;
    out.position = apply(rhs.position);
    out.orientation = (orientation * rhs.orientation).normalized();
    return out;
  }

  Pose inverse() const {
    Pose out;
    out.orientation = orientation.conjugate().normalized();
    out.position = -(out.orientation * position);
    return out;
  }
};

inline bool is_unit(const Quat& q, double tolerance) {
  return std::abs(q.norm() - 1.0) <= tolerance;
}

}  // namespace hybridsense

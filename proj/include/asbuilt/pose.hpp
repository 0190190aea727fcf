#pragma once

#include "asbuilt/vec3.hpp"

namespace asbuilt {

/// Rotation quaternion (w, x, y, z).
struct Quat {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend constexpr bool operator==(const Quat&, const Quat&) = default;
};

inline constexpr double kUnitQuatTolerance = 1e-9;

double quat_norm(const Quat& q);
bool is_unit(const Quat& q);
/// Throws std::invalid_argument for zero-length or non-finite input.
Quat normalized(const Quat& q);
/// Rotation of `degrees` about `axis` (need not be unit length).
Quat axis_angle(const Vec3& axis, double degrees);
Quat multiply(const Quat& a, const Quat& b);
Vec3 rotate(const Quat& q, const Vec3& v);

struct Pose {
  Vec3 translation;
  Quat rotation;

  friend constexpr bool operator==(const Pose&, const Pose&) = default;
};

/// Validating constructor: finite translation, unit rotation within 1e-9.
Pose make_pose(const Vec3& translation, const Quat& rotation);

double translation_distance(const Pose& a, const Pose& b);  // mm
/// Angle of the relative rotation, in degrees within [0, 180]. q and -q are
/// the same rotation.
double rotation_angle(const Pose& a, const Pose& b);

}  // namespace asbuilt

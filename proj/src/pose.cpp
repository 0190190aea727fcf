#include "asbuilt/pose.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace asbuilt {

double quat_norm(const Quat& q) { return std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z); }

bool is_unit(const Quat& q) { return std::abs(quat_norm(q) - 1.0) <= kUnitQuatTolerance; }

Quat normalized(const Quat& q) {
  const double n = quat_norm(q);
  if (!std::isfinite(n) || n == 0.0) throw std::invalid_argument("quaternion must be finite and non-zero");
  return {q.w / n, q.x / n, q.y / n, q.z / n};
}

Quat axis_angle(const Vec3& axis, double degrees) {
  const double len = norm(axis);
  if (!(len > 0.0) || !std::isfinite(len)) throw std::invalid_argument("rotation axis must be finite and non-zero");
  const double half = 0.5 * degrees * std::numbers::pi / 180.0;
  const double s = std::sin(half) / len;
  return {std::cos(half), axis.x * s, axis.y * s, axis.z * s};
}

Quat multiply(const Quat& a, const Quat& b) {
  return {
      a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
      a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
      a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
      a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
  };
}

Vec3 rotate(const Quat& q, const Vec3& v) {
  const Vec3 u{q.x, q.y, q.z};
  const Vec3 t = 2.0 * cross(u, v);
  return v + q.w * t + cross(u, t);
}

Pose make_pose(const Vec3& translation, const Quat& rotation) {
  if (!is_finite(translation)) throw std::invalid_argument("pose translation must be finite");
  if (!is_unit(rotation)) throw std::invalid_argument("pose rotation must be a unit quaternion");
  return {translation, rotation};
}

double translation_distance(const Pose& a, const Pose& b) { return norm(a.translation - b.translation); }

double rotation_angle(const Pose& a, const Pose& b) {
  // 2*acos(|a.b|) evaluated as 2*atan2(|vec(r)|, |w(r)|) with r = conj(a)*b,
  // which stays accurate near 0 and 180 degrees.
  const Quat& p = a.rotation;
  const Quat r = multiply({p.w, -p.x, -p.y, -p.z}, b.rotation);
  const double vec = std::sqrt(r.x * r.x + r.y * r.y + r.z * r.z);
  const double deg = 2.0 * std::atan2(vec, std::abs(r.w)) * 180.0 / std::numbers::pi;
  return std::clamp(deg, 0.0, 180.0);
}

}  // namespace asbuilt

// Copyright 2026 The Apiary Desk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "apiary/math3d.hpp"

#include <algorithm>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace apiary {

namespace {

// Below this angle sin(t/2)/t is evaluated by its Taylor series.
constexpr double kSmallAngle = 1e-8;

}  // namespace

std::ostream& operator<<(std::ostream& os, const Vec3& v) {
  return os << '(' << v.x << ", " << v.y << ", " << v.z << ')';
}

std::ostream& operator<<(std::ostream& os, const Quat& q) {
  return os << "(w=" << q.w() << ", x=" << q.x() << ", y=" << q.y() << ", z=" << q.z() << ')';
}

Quat::Quat(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!std::isfinite(n) || n == 0.0) {
    throw std::domain_error("quaternion is non-finite or zero");
  }
  w_ = w / n;
  x_ = x / n;
  y_ = y / n;
  z_ = z / n;
}

Quat quat_mul(const Quat& a, const Quat& b) {
  if (!a.is_finite() || !b.is_finite()) {
    throw std::domain_error("quat_mul: non-finite input");
  }
  return Quat(a.w() * b.w() - a.x() * b.x() - a.y() * b.y() - a.z() * b.z(),
              a.w() * b.x() + a.x() * b.w() + a.y() * b.z() - a.z() * b.y(),
              a.w() * b.y() - a.x() * b.z() + a.y() * b.w() + a.z() * b.x(),
              a.w() * b.z() + a.x() * b.y() - a.y() * b.x() + a.z() * b.w());
}

Quat quat_from_axis_angle(const Vec3& axis, double angle) {
  if (!axis.is_finite() || !std::isfinite(angle)) {
    throw std::domain_error("quat_from_axis_angle: non-finite input");
  }
  const double n = axis.norm();
  if (n == 0.0) {
    throw std::invalid_argument("quat_from_axis_angle: zero axis");
  }
  const double s = std::sin(0.5 * angle) / n;
  return Quat(std::cos(0.5 * angle), axis.x * s, axis.y * s, axis.z * s);
}

Quat quat_from_rotvec(const Vec3& rotvec) {
  if (!rotvec.is_finite()) {
    throw std::domain_error("quat_from_rotvec: non-finite input");
  }
  const double angle = rotvec.norm();
  // sin(angle/2)/angle, with the series 1/2 - angle^2/48 near zero.
  const double k = angle < kSmallAngle ? 0.5 - angle * angle / 48.0 : std::sin(0.5 * angle) / angle;
  return Quat(std::cos(0.5 * angle), rotvec.x * k, rotvec.y * k, rotvec.z * k);
}

Vec3 quat_to_rotvec(const Quat& q) {
  const Quat c = q.canonical();
  const Vec3 v = c.vec();
  const double s = v.norm();
  // atan2 keeps precision near both 0 and pi.
  const double angle = 2.0 * std::atan2(s, c.w());
  if (s < kSmallAngle) {
    // angle/s -> 2/w for small rotations.
    return v * (2.0 / c.w());
  }
  return v * (angle / s);
}

Vec3 quat_error(const Quat& goal, const Quat& current) {
  return quat_to_rotvec(quat_mul(goal, current.conjugate()));
}

Quat quat_integrate(const Quat& q, const Vec3& omega_body, double dt) {
  return quat_mul(q, quat_from_rotvec(omega_body * dt));
}

double quat_angle_between(const Quat& a, const Quat& b) {
  const double d = std::abs(a.w() * b.w() + a.x() * b.x() + a.y() * b.y() + a.z() * b.z());
  return 2.0 * std::acos(std::min(1.0, d));
}

Vec3 rotate(const Quat& q, const Vec3& v) {
  // v + 2 u x (u x v + w v), u = vector part.
  const Vec3 u = q.vec();
  const Vec3 t = 2.0 * cross(u, v);
  return v + q.w() * t + cross(u, t);
}

Vec3 rotate_inverse(const Quat& q, const Vec3& v) { return rotate(q.conjugate(), v); }

Mat3 rotation_matrix(const Quat& q) {
  const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
  return {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
           {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
           {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
}

}  // namespace apiary

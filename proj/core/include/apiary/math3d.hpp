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

#pragma once

#include <array>
#include <cmath>
#include <iosfwd>

namespace apiary {

/// Three-component vector. Units depend on context (m, m/s, rad/s, N, N*m).
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  static constexpr Vec3 zero() { return {}; }
  static constexpr Vec3 unit_x() { return {1.0, 0.0, 0.0}; }
  static constexpr Vec3 unit_y() { return {0.0, 1.0, 0.0}; }
  static constexpr Vec3 unit_z() { return {0.0, 0.0, 1.0}; }

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  constexpr double squared_norm() const { return x * x + y * y + z * z; }
  bool is_finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
/// Component-wise product, used for diagonal inertia.
constexpr Vec3 hadamard(const Vec3& a, const Vec3& b) { return {a.x * b.x, a.y * b.y, a.z * b.z}; }

std::ostream& operator<<(std::ostream& os, const Vec3& v);

/// Unit quaternion, scalar-first, Hamilton convention. Represents the
/// body-to-world rotation when used as an attitude.
class Quat {
 public:
  constexpr Quat() = default;

  /// Normalizes the given components. Throws std::domain_error on non-finite
  /// or zero-norm input.
  Quat(double w, double x, double y, double z);

  static constexpr Quat identity() { return Quat(); }

  /// Builds without normalizing. Caller guarantees unit norm.
  static constexpr Quat from_unit(double w, double x, double y, double z) {
    Quat q;
    q.w_ = w;
    q.x_ = x;
    q.y_ = y;
    q.z_ = z;
    return q;
  }

  constexpr double w() const { return w_; }
  constexpr double x() const { return x_; }
  constexpr double y() const { return y_; }
  constexpr double z() const { return z_; }
  constexpr Vec3 vec() const { return {x_, y_, z_}; }

  double norm() const { return std::sqrt(w_ * w_ + x_ * x_ + y_ * y_ + z_ * z_); }
  bool is_finite() const {
    return std::isfinite(w_) && std::isfinite(x_) && std::isfinite(y_) && std::isfinite(z_);
  }

  constexpr Quat conjugate() const { return from_unit(w_, -x_, -y_, -z_); }
  Quat normalized() const { return Quat(w_, x_, y_, z_); }
  /// Same rotation with w >= 0.
  constexpr Quat canonical() const { return w_ < 0.0 ? from_unit(-w_, -x_, -y_, -z_) : *this; }

  friend constexpr bool operator==(const Quat&, const Quat&) = default;

 private:
  double w_ = 1.0;
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, const Quat& q);

/// Hamilton product a*b, renormalized. Throws std::domain_error on non-finite input.
Quat quat_mul(const Quat& a, const Quat& b);

/// Rotation of `angle` radians about `axis` (need not be unit length).
/// Throws std::invalid_argument for a zero axis.
Quat quat_from_axis_angle(const Vec3& axis, double angle);

/// Exponential map: rotation vector (axis * angle) to quaternion.
Quat quat_from_rotvec(const Vec3& rotvec);

/// Logarithm map of the canonical (w >= 0) form, so the angle is in [0, pi].
Vec3 quat_to_rotvec(const Quat& q);

/// Rotation vector of goal * conj(current): the world-frame rotation that
/// carries `current` onto `goal`.
Vec3 quat_error(const Quat& goal, const Quat& current);

/// Advances q by a body-frame rate held constant over dt: q * exp(omega * dt).
Quat quat_integrate(const Quat& q, const Vec3& omega_body, double dt);

/// Geodesic angle between two attitudes, in [0, pi].
double quat_angle_between(const Quat& a, const Quat& b);

/// v expressed in world given q body->world.
Vec3 rotate(const Quat& q, const Vec3& v);
/// Inverse of rotate: world vector expressed in body axes.
Vec3 rotate_inverse(const Quat& q, const Vec3& v);

using Mat3 = std::array<std::array<double, 3>, 3>;
Mat3 rotation_matrix(const Quat& q);

}  // namespace apiary

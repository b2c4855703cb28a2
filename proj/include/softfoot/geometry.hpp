#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>

namespace softfoot {

using Vec2 = Eigen::Vector2d;

// Rotate a vector by +90 degrees (counterclockwise with x right, z up).
inline Vec2 perp(const Vec2& v) { return Vec2(-v.y(), v.x()); }

inline Vec2 rot(double angle, const Vec2& v) {
  const double c = std::cos(angle), s = std::sin(angle);
  return Vec2(c * v.x() - s * v.y(), s * v.x() + c * v.y());
}

// Normalize an angle to (-pi, pi].
inline double normalize_angle(double a) {
  double r = std::remainder(a, 2.0 * M_PI);
  if (r <= -M_PI) r = M_PI;
  return r;
}

// Planar rigid transform: x_world = translation + R(rotation) * x_local.
struct Transform2 {
  Vec2 translation = Vec2::Zero();
  double rotation = 0.0;

  Vec2 apply(const Vec2& local) const { return translation + rot(rotation, local); }

  Transform2 compose(const Transform2& other) const {
    return Transform2{apply(other.translation), rotation + other.rotation};
  }

  static Transform2 identity() { return Transform2{}; }

  // Pure rotation about a fixed world-frame point.
  static Transform2 rotation_about(double angle, const Vec2& point) {
    return Transform2{point - rot(angle, point), angle};
  }
};

// Oriented rectangle: center, half extents along local axes, rotation.
struct OrientedBox {
  Vec2 center = Vec2::Zero();
  Vec2 half_extents = Vec2::Zero();
  double rotation = 0.0;

  std::array<Vec2, 4> corners() const {
    const Vec2 ex = rot(rotation, Vec2(half_extents.x(), 0.0));
    const Vec2 ez = rot(rotation, Vec2(0.0, half_extents.y()));
    return {center + ex + ez, center - ex + ez, center - ex - ez, center + ex - ez};
  }
};

}  // namespace softfoot

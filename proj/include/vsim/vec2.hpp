#pragma once

#include <cmath>

namespace vsim {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator/(double s) const { return {x / s, y / s}; }
  Vec2& operator+=(const Vec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  Vec2& operator-=(const Vec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  // z component of the 3-D cross product; positive when o is counterclockwise from *this.
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double length_sq() const { return x * x + y * y; }
  double length() const { return std::sqrt(length_sq()); }
  Vec2 normalized() const {
    double len = length();
    return len > 0.0 ? Vec2{x / len, y / len} : Vec2{0.0, 0.0};
  }
  // counterclockwise perpendicular
  Vec2 perp() const { return {-y, x}; }
  Vec2 rotated(double angle) const {
    double c = std::cos(angle), s = std::sin(angle);
    return {c * x - s * y, s * x + c * y};
  }
  bool is_finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

// ω × r for planar bodies (angular velocity as scalar z component).
inline Vec2 angular_cross(double w, const Vec2& r) { return {-w * r.y, w * r.x}; }

}  // namespace vsim

#pragma once

#include <cmath>
#include <numbers>

namespace polywave {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A point (or vector) in the plane.
struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend constexpr Point2 operator-(Point2 a) { return {-a.x1, -a.x2}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x1, s * a.x2}; }
  friend constexpr Point2 operator*(Point2 a, double s) { return {s * a.x1, s * a.x2}; }
  friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

constexpr double dot(Point2 a, Point2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
constexpr double cross(Point2 a, Point2 b) { return a.x1 * b.x2 - a.x2 * b.x1; }
inline double norm(Point2 a) { return std::hypot(a.x1, a.x2); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }

/// Polar angle of a direction, in (-pi, pi].
inline double polar_angle(Point2 d) { return std::atan2(d.x2, d.x1); }

/// Wraps an angle into [0, 2pi).
inline double wrap_angle(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

/// Counterclockwise angle swept from direction `from` to direction `to`, in [0, 2pi).
inline double ccw_angle(Point2 from, Point2 to) {
  return wrap_angle(polar_angle(to) - polar_angle(from));
}

inline Point2 unit_direction(double angle) { return {std::cos(angle), std::sin(angle)}; }

}  // namespace polywave

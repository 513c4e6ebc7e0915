#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

namespace surfdiff {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
constexpr Vec2& operator+=(Vec2& a, Vec2 b) { a.x += b.x; a.y += b.y; return a; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::sqrt(norm2(a)); }

// Row-major 2x2 matrix; symmetric producers keep m01 == m10.
struct Mat2 {
  double m00 = 0.0, m01 = 0.0, m10 = 0.0, m11 = 0.0;
  static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
};

constexpr Mat2 operator+(const Mat2& a, const Mat2& b) {
  return {a.m00 + b.m00, a.m01 + b.m01, a.m10 + b.m10, a.m11 + b.m11};
}
constexpr Mat2 operator-(const Mat2& a, const Mat2& b) {
  return {a.m00 - b.m00, a.m01 - b.m01, a.m10 - b.m10, a.m11 - b.m11};
}
constexpr Mat2 operator*(double s, const Mat2& a) {
  return {s * a.m00, s * a.m01, s * a.m10, s * a.m11};
}
constexpr Mat2& operator+=(Mat2& a, const Mat2& b) {
  a.m00 += b.m00; a.m01 += b.m01; a.m10 += b.m10; a.m11 += b.m11;
  return a;
}
constexpr Vec2 operator*(const Mat2& a, Vec2 v) {
  return {a.m00 * v.x + a.m01 * v.y, a.m10 * v.x + a.m11 * v.y};
}
constexpr Mat2 operator*(const Mat2& a, const Mat2& b) {
  return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
          a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}
constexpr Mat2 outer(Vec2 a, Vec2 b) {
  return {a.x * b.x, a.x * b.y, a.y * b.x, a.y * b.y};
}
constexpr double trace(const Mat2& a) { return a.m00 + a.m11; }
constexpr double det(const Mat2& a) { return a.m00 * a.m11 - a.m01 * a.m10; }
constexpr Mat2 adjugate(const Mat2& a) { return {a.m11, -a.m01, -a.m10, a.m00}; }

inline Mat2 inverse(const Mat2& a) {
  const double d = det(a);
  return {a.m11 / d, -a.m01 / d, -a.m10 / d, a.m00 / d};
}

inline double max_abs(const Mat2& a) {
  return std::max(std::max(std::abs(a.m00), std::abs(a.m01)),
                  std::max(std::abs(a.m10), std::abs(a.m11)));
}

// Eigenvalues of a symmetric 2x2, ascending.
inline std::pair<double, double> sym_eigenvalues(const Mat2& a) {
  const double mid = 0.5 * (a.m00 + a.m11);
  const double off = 0.5 * (a.m01 + a.m10);
  const double rad = std::hypot(0.5 * (a.m00 - a.m11), off);
  return {mid - rad, mid + rad};
}

}  // namespace surfdiff

#pragma once

#include <array>
#include <cmath>

namespace yaglom {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 scaled(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }

inline Vec3 negated(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }

}  // namespace yaglom

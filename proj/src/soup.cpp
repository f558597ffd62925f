#include "lrkit/soup.hpp"

#include <algorithm>
#include <cmath>

namespace lrkit {

Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 facet_normal(const std::array<Vec3, 3>& v) {
  const Vec3 e1 = v[1] - v[0], e2 = v[2] - v[0];
  const Vec3 n = cross(e1, e2);
  const double len = norm(n);
  const double scale = std::max({dot(e1, e1), dot(e2, e2), dot(v[2] - v[1], v[2] - v[1])});
  if (!(len > 1e-14 * scale) || len == 0) return {0, 0, 0};
  return {n[0] / len, n[1] / len, n[2] / len};
}

Vec3 effective_normal(const Triangle& t) {
  if (t.normal != Vec3{0, 0, 0}) return t.normal;
  return facet_normal(t.v);
}

}  // namespace lrkit

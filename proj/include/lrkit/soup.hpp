#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace lrkit {

using Vec3 = std::array<double, 3>;

Vec3 operator-(const Vec3& a, const Vec3& b);
Vec3 cross(const Vec3& a, const Vec3& b);
double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& a);

struct Triangle {
  std::array<Vec3, 3> v{};
  Vec3 normal{0, 0, 0};         // as stored; (0,0,0) is common and allowed
  std::uint16_t attribute = 0;  // binary STL attribute byte count

  friend bool operator==(const Triangle&, const Triangle&) = default;
};

/// Unstructured triangle list; no topology is implied.
struct TriangleSoup {
  std::string name;
  std::vector<Triangle> triangles;

  friend bool operator==(const TriangleSoup&, const TriangleSoup&) = default;
};

/// Unit normal by the right-hand rule, (0,0,0) for a degenerate triangle.
Vec3 facet_normal(const std::array<Vec3, 3>& v);

/// The stored normal when nonzero, otherwise the one implied by the
/// vertex order.
Vec3 effective_normal(const Triangle& t);

}  // namespace lrkit

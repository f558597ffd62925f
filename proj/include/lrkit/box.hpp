#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lrkit {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
  bool contains_strictly(double x) const { return lo < x && x < hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool overlaps(const Interval& o) const { return lo < o.hi && o.lo < hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

/// Axis-aligned box, one closed interval per direction.
struct Box {
  std::vector<Interval> sides;

  std::size_t dim() const { return sides.size(); }
  const Interval& operator[](std::size_t k) const { return sides[k]; }
  Interval& operator[](std::size_t k) { return sides[k]; }

  double volume() const {
    double v = 1.0;
    for (const auto& s : sides) v *= s.length();
    return v;
  }

  bool contains(std::span<const double> x) const {
    for (std::size_t k = 0; k < sides.size(); ++k)
      if (!sides[k].contains(x[k])) return false;
    return true;
  }

  bool contains(const Box& o) const {
    for (std::size_t k = 0; k < sides.size(); ++k)
      if (!sides[k].contains(o.sides[k])) return false;
    return true;
  }

  /// True when the interiors intersect.
  bool overlaps(const Box& o) const {
    for (std::size_t k = 0; k < sides.size(); ++k)
      if (!sides[k].overlaps(o.sides[k])) return false;
    return true;
  }

  friend bool operator==(const Box&, const Box&) = default;
  friend auto operator<=>(const Box&, const Box&) = default;
};

}  // namespace lrkit

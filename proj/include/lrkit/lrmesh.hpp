#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "lrkit/box.hpp"
#include "lrkit/splinecore.hpp"

namespace lrkit {

/// Axis-aligned knot segment (d=2), facet (d=3) or knot (d=1). `extent`
/// holds one interval per direction other than `direction`, in increasing
/// direction order.
struct MeshRectangle {
  std::size_t direction = 0;
  double value = 0.0;
  std::vector<Interval> extent;
  int multiplicity = 1;

  std::size_t dim() const { return extent.size() + 1; }
  /// The rectangle as a d-box, degenerate in `direction`.
  Box box() const;
  /// Transverse part of a full d-box, in the layout of `extent`.
  static std::vector<Interval> transverse(const Box& box, std::size_t direction);

  friend bool operator==(const MeshRectangle&, const MeshRectangle&) = default;
  friend auto operator<=>(const MeshRectangle&, const MeshRectangle&) = default;
};

/// Box-partition of a d-box (d in 1..3). Collinear meshrectangles are kept
/// as maximal pieces of constant multiplicity, so equal partitions compare
/// equal regardless of insertion order.
class BoxPartition {
public:
  BoxPartition(Box domain, std::vector<int> degrees);

  /// Full-extent meshrectangles for every unique knot of each direction.
  static BoxPartition from_tensor_space(const std::vector<KnotVector>& knots);

  const Box& domain() const { return domain_; }
  const std::vector<int>& degrees() const { return degrees_; }
  std::size_t dim() const { return domain_.dim(); }

  /// Copying insert; overlaps take the larger multiplicity.
  BoxPartition insert(const MeshRectangle& r) const;
  void insert_in_place(const MeshRectangle& r);

  /// Canonical list, sorted.
  std::vector<MeshRectangle> rectangles() const;
  std::size_t size() const;

  /// Multiplicity of the plane (direction, value) at a transverse point.
  int multiplicity_at(std::size_t direction, double value, std::span<const double> transverse) const;

  /// Minimum multiplicity of plane (direction, value) over the transverse
  /// sides of `box`; 0 if any part is uncovered.
  int covering_multiplicity(std::size_t direction, double value, const Box& box) const;

  /// True if r is already covered with at least its multiplicity.
  bool covers(const MeshRectangle& r) const;

  /// Values of all planes orthogonal to `direction`, ascending.
  std::vector<double> values(std::size_t direction) const;

  /// Plane values strictly between lo and hi.
  std::vector<double> values_between(std::size_t direction, double lo, double hi) const;

  /// Boxes of the induced partition, sorted.
  std::vector<Box> elements() const;

  /// Throws Validation if the boundary is not covered with multiplicity
  /// p_k + 1.
  void validate_clamped() const;

  friend bool operator==(const BoxPartition& a, const BoxPartition& b) {
    return a.domain_ == b.domain_ && a.degrees_ == b.degrees_ && a.planes_ == b.planes_;
  }

private:
  using PlaneKey = std::pair<std::size_t, double>;

  void check(const MeshRectangle& r) const;

  Box domain_;
  std::vector<int> degrees_;
  std::map<PlaneKey, std::vector<MeshRectangle>> planes_;
};

/// True iff r passes strictly through b's support in r.direction, covers
/// it transversally, and raises b's knot multiplicity there.
bool splits_support(const MeshRectangle& r, const TensorBSpline& b);

}  // namespace lrkit

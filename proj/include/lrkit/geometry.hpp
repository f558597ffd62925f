#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "lrkit/collection.hpp"
#include "lrkit/soup.hpp"
#include "lrkit/splinecore.hpp"

namespace lrkit {

/// A collection carrying control points in R^3 (and optional weights).
/// Copies share the immutable collection.
class SplineGeometry {
public:
  /// Validation error unless coef_dim is 3, d is 1..3 and weights are
  /// positive.
  explicit SplineGeometry(SplineCollection c);

  const SplineCollection& collection() const { return *c_; }
  std::size_t dim() const { return c_->dim; }
  const Box& domain() const { return domain_; }

  /// Point and first partial derivatives at u.
  struct Jet {
    Vec3 point{};
    std::vector<Vec3> partials;
  };
  /// OutOfDomain outside the parameter box.
  Jet jet(std::span<const double> u) const;
  /// Point only, without the derivative work of jet().
  Vec3 point(std::span<const double> u) const;

private:
  struct Index {
    std::vector<std::vector<double>> breaks;     // per direction
    std::vector<std::vector<std::size_t>> cells;  // members overlapping each cell
    std::vector<double> scale;                    // gamma * weight
  };
  /// Members nonzero at u; checks the domain and picks the one-sided limits.
  const std::vector<std::size_t>& candidates(std::span<const double> u, std::vector<Side>& sides) const;

  std::shared_ptr<const SplineCollection> c_;
  std::shared_ptr<const Index> index_;
  Box domain_;
};

/// Polynomial collections evaluate sum(gamma c B); rational ones divide by
/// sum(gamma w B).
Vec3 eval_geometry(const SplineGeometry& g, std::span<const double> u);

/// Control points at the members' Greville points, padded with zeros to
/// three coordinates.
SplineCollection with_greville_points(SplineCollection c);

/// The collection restricted to `value` in `direction`: one dimension less,
/// the lost factor folded exactly into gamma. Flagged NotTested.
SplineGeometry extract_isocurve(const SplineGeometry& g, std::size_t direction, double value);

struct BSplineCurve {
  KnotVector knots;
  std::vector<Vec3> points;
  std::vector<double> weights;  // empty for polynomial curves
};

Vec3 eval_curve(const BSplineCurve& c, double x);

/// Rewrites a curve collection on the knot vector holding every value at
/// its largest member multiplicity. InvalidInput for mixed degrees.
BSplineCurve to_minimal_basis(const SplineGeometry& curve);

/// Triangulates a surface on the grid of all member knot values, each cell
/// split uniformly n x n with n doubled until every triangle's edge
/// midpoints and centroid lie within `tolerance` of the surface.
TriangleSoup tessellate(const SplineGeometry& g, double tolerance);

struct Polyline {
  std::vector<Vec3> points;  // closed loops do not repeat the first point
  bool closed = false;

  double length() const;
};

struct Slice {
  double height = 0;
  bool perturbed = false;  // height moved off a vertex z-value
  std::vector<Polyline> polylines;
};

/// Intersects the soup with z = h and chains the segments by endpoint
/// matching within `tolerance`.
Slice slice(const TriangleSoup& soup, double h, double tolerance = 1e-9);

}  // namespace lrkit

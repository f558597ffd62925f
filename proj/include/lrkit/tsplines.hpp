#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "lrkit/collection.hpp"
#include "lrkit/rational.hpp"
#include "lrkit/splinecore.hpp"

namespace lrkit {

/// A knot line of a T-mesh. The clamped frame repeats each boundary value
/// four times; `tie` tells those copies apart (0..3, inner copies are the
/// ones nearer the interior). Interior lines have tie 0.
struct KnotKey {
  double value = 0;
  int tie = 0;

  friend bool operator==(const KnotKey&, const KnotKey&) = default;
  friend auto operator<=>(const KnotKey&, const KnotKey&) = default;
};

/// (s, t) in key coordinates.
using TPoint = std::array<KnotKey, 2>;
using KeyKnots = std::array<KnotKey, 5>;

/// A bicubic B-spline anchored at its middle knot pair.
struct InferredBSpline {
  TPoint anchor;
  std::array<KeyKnots, 2> knots;
  Rational gamma{1};
  std::vector<double> coef;

  TensorBSpline bspline() const;
};

enum class TSplineClass { Standard, SemiStandard, NonStandard };
const char* to_string(TSplineClass c);

/// Bicubic T-mesh over a clamped frame. Edges are stored per constant
/// coordinate: edges(k) maps a key of direction k to closed intervals of
/// the other direction. Vertices are the anchors; crossings of edges need
/// not be vertices. Alongside the mesh the refined B-splines are kept with
/// their accumulated scaling factors.
class TMesh {
public:
  /// Bicubic clamped knot vectors with simple interior knots. Coefficients
  /// are coef_dim values per function, first direction fastest; empty
  /// selects the Greville points.
  static TMesh from_tensor(const KnotVector& s, const KnotVector& t, std::vector<double> coefficients = {},
                           std::size_t coef_dim = 0);

  std::size_t coef_dim() const { return coef_dim_; }
  const Interval& domain(std::size_t k) const { return domain_[k]; }
  /// Key of an interior parameter value; InvalidInput on the frame or outside.
  KnotKey key(std::size_t k, double value) const;
  TPoint point(double s, double t) const { return {key(0, s), key(1, t)}; }

  const std::set<TPoint>& anchors() const { return anchors_; }
  bool is_anchor(const TPoint& p) const { return anchors_.count(p) > 0; }
  const std::map<KnotKey, std::vector<std::pair<KnotKey, KnotKey>>>& edges(std::size_t k) const { return edges_[k]; }
  /// Does p lie on an edge whose direction-k coordinate is constant?
  bool on_edge(const TPoint& p, std::size_t k) const;

  /// Raw mesh editing without touching the stored B-splines, for building
  /// meshes by hand. The interval is in the direction other than k.
  void add_edge(std::size_t k, KnotKey line, KnotKey from, KnotKey to);
  /// Raw vertex; InvalidInput unless p lies on an edge.
  void add_anchor(const TPoint& p);

  /// The stored B-splines (merged where knots coincide).
  std::vector<InferredBSpline> functions() const;

private:
  friend std::pair<TMesh, std::vector<InferredBSpline>> semi_standard_insert(const TMesh&, const std::vector<TPoint>&);
  friend std::array<KeyKnots, 2> infer_knots(const TMesh&, const TPoint&);

  struct Entry {
    Rational gamma;
    std::vector<double> gc;  // gamma-weighted control values
  };
  using FunctionKey = std::array<KeyKnots, 2>;

  void insert_vertex(const TPoint& p);
  /// Next two lines hit from p moving in direction k (sign +1 or -1).
  std::array<KnotKey, 2> hits(const TPoint& p, std::size_t k, int sign) const;
  void connect(const TPoint& a, const TPoint& b);

  std::array<Interval, 2> domain_;
  std::size_t coef_dim_ = 0;
  std::array<std::map<KnotKey, std::vector<std::pair<KnotKey, KnotKey>>>, 2> edges_;
  std::set<TPoint> anchors_;
  // rows_[k][c]: other coordinates of the anchors whose direction-k key is c.
  std::array<std::map<KnotKey, std::set<KnotKey>>, 2> rows_;
  std::map<FunctionKey, Entry> functions_;
};

/// Knots by traversal: the anchor's key plus the first two lines (edges
/// or vertices) met on each side, per direction. MalformedMesh if a ray
/// runs out of lines; InvalidInput if a is not an anchor.
std::array<KeyKnots, 2> infer_knots(const TMesh& m, const TPoint& a);

/// Would inserting q refine only B-splines sharing their transverse knot
/// vector? InvalidInput if q is not on an edge.
bool standard_rule_check(const TMesh& m, const TPoint& q);

/// Inserts the points (each on an existing edge; a coordinate may be a
/// frame copy that carries anchors), joins new collinear
/// points that see each other, then refines and adds vertices until every
/// stored B-spline agrees with traversal. FixpointFailure when the repair
/// loop exceeds 10 sweeps per anchor.
std::pair<TMesh, std::vector<InferredBSpline>> semi_standard_insert(const TMesh& m, const std::vector<TPoint>& qs);
std::pair<TMesh, std::vector<InferredBSpline>> semi_standard_insert(const TMesh& m, const TPoint& q);

struct TSplineCollection {
  SplineCollection collection;
  TSplineClass kind = TSplineClass::NonStandard;
};

/// One member per anchor with traversal knots; scaling and control values
/// come from the stored B-splines anchored there. Standard when unscaled
/// and summing to one, SemiStandard when only the scaled sum is one.
TSplineCollection tmesh_to_collection(const TMesh& m);

}  // namespace lrkit

#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "lrkit/collection.hpp"
#include "lrkit/lrmesh.hpp"

namespace lrkit {

struct RefineOptions {
  /// Recompute linear independence (exact rank) after every step.
  bool hand_in_hand = false;
};

/// Bookkeeping of the last refinement: how many B-splines were replaced
/// and how many new ones appeared.
struct RefineStats {
  std::size_t split = 0;
  std::size_t produced = 0;
};

struct LRCollection {
  BoxPartition mesh;
  SplineCollection splines;
  RefineStats last;
};

/// Full tensor space. `coefficients` holds coef_dim values per B-spline
/// (first direction running fastest); when empty, the Greville points are
/// used, so the collection represents the identity map.
LRCollection from_tensor(const std::vector<KnotVector>& knots, std::vector<double> coefficients = {},
                         std::size_t coef_dim = 0);

/// Inserts r and splits until every B-spline has minimal support. Throws
/// NoSplit if nothing changes.
LRCollection refine(const LRCollection& c, const MeshRectangle& r, const RefineOptions& options = {});

/// Several insertions followed by one splitting pass; rectangles already
/// present are skipped.
LRCollection refine_all(const LRCollection& c, const std::vector<MeshRectangle>& rs,
                        const RefineOptions& options = {});

/// Bisects every element of the selected B-splines' supports in every
/// direction.
LRCollection structured_refine(const LRCollection& c, const std::vector<std::size_t>& selected,
                               const RefineOptions& options = {});

/// A (direction, value) on which the mesh splits b, if any.
std::optional<std::pair<std::size_t, double>> find_split(const TensorBSpline& b, const BoxPartition& mesh);

bool minimal_support(const TensorBSpline& b, const BoxPartition& mesh);

/// Middle knot for odd degree, mean of the two middle knots for even.
std::vector<double> anchor(const TensorBSpline& b);

}  // namespace lrkit

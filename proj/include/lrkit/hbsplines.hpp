#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "lrkit/box.hpp"
#include "lrkit/collection.hpp"
#include "lrkit/diagnostics.hpp"
#include "lrkit/splinecore.hpp"

namespace lrkit {

using MultiIndex = std::vector<int>;

/// A tensor B-spline of one dyadic level, by per-direction index.
struct FunctionId {
  int level = 0;
  MultiIndex index;

  friend bool operator==(const FunctionId&, const FunctionId&) = default;
  friend auto operator<=>(const FunctionId&, const FunctionId&) = default;
};

/// Hierarchical selection over dyadic levels of a clamped uniform space.
/// Level l has base_cells * 2^l cells per direction. region(l) (l >= 1) is
/// a set of level-l cells; level 0 covers the whole domain. A level-l
/// B-spline is active iff its support lies in region(l) but not in
/// region(l+1). Control values of the active functions are carried along.
class HierarchySelection {
public:
  /// `coefficients` holds coef_dim values per level-0 function, first
  /// direction fastest; empty selects the Greville points.
  HierarchySelection(Box domain, std::vector<int> base_cells, std::vector<int> degrees,
                     std::vector<double> coefficients = {}, std::size_t coef_dim = 0, int max_level = 10);

  std::size_t dim() const { return domain_.dim(); }
  const Box& domain() const { return domain_; }
  const std::vector<int>& degrees() const { return degrees_; }
  int max_level() const { return max_level_; }
  /// Highest level with a non-empty region (0 if unrefined).
  int finest_level() const;
  std::size_t coef_dim() const { return coef_dim_; }

  int cells(int level, std::size_t dir) const { return base_cells_[dir] << level; }
  const KnotVector& knots(int level, std::size_t dir) const;
  TensorBSpline function(const FunctionId& id) const;
  Box cell_box(int level, const MultiIndex& cell) const;
  /// Level cells whose closure lies in `box`.
  std::vector<MultiIndex> cells_in(int level, const Box& box) const;
  const std::set<MultiIndex>& region(int level) const;

  /// Support of a function as a half-open cell range per direction.
  std::vector<std::pair<int, int>> support_cells(const FunctionId& id) const;
  /// Is the support contained in region(level)? Always true for level 0.
  bool support_in_region(const FunctionId& id, int level) const;
  /// The selection predicate.
  bool kraft_active(const FunctionId& id) const;

  const std::vector<FunctionId>& active() const { return active_; }
  bool is_active(const FunctionId& id) const;
  const std::map<FunctionId, std::vector<double>>& coefficients() const { return coef_; }

  /// Exact expansion in the next level's basis.
  std::vector<std::pair<FunctionId, Rational>> children(const FunctionId& id) const;

private:
  friend HierarchySelection hb_refine(const HierarchySelection&, int, const std::vector<MultiIndex>&);

  void recompute_active();

  Box domain_;
  std::vector<int> base_cells_;
  std::vector<int> degrees_;
  std::size_t coef_dim_ = 0;
  int max_level_;
  std::vector<std::set<MultiIndex>> regions_;  // index l, entry 0 unused
  std::vector<std::vector<KnotVector>> knots_;  // [level][direction]
  std::vector<FunctionId> active_;
  std::map<FunctionId, std::vector<double>> coef_;
};

/// Adds level-(level+1) cells to region(level+1). Deactivated functions
/// pass their control values to their children, so the geometry is kept.
HierarchySelection hb_refine(const HierarchySelection& sel, int level, const std::vector<MultiIndex>& cells);
HierarchySelection hb_refine(const HierarchySelection& sel, int level, const Box& region);

/// trunc(base) = sum of terms; base = trunc(base) + sum of dropped. Terms
/// are kept at the coarsest level at which nothing is removed.
struct TruncatedFunction {
  FunctionId base;
  std::vector<std::pair<FunctionId, Rational>> terms;
  std::vector<std::pair<FunctionId, Rational>> dropped;
};

std::vector<TruncatedFunction> truncate(const HierarchySelection& sel);

CompositeFunction composite(const HierarchySelection& sel, const TruncatedFunction& t);

/// True iff the closure of {trunc(B) != 0} is connected, judged on the
/// finest-level cells (cells touching at a corner count as connected).
bool disjoint_support_check(const HierarchySelection& sel, const TruncatedFunction& t);

/// Control values for the truncated basis that reproduce the hierarchical
/// geometry exactly; one entry per active function.
std::map<FunctionId, std::vector<double>> thb_coefficients(const HierarchySelection& sel,
                                                           const std::vector<TruncatedFunction>& t);

/// Flat collection; the truncated variant lists every term of every
/// truncated function, merged where B-splines coincide.
SplineCollection hb_to_collection(const HierarchySelection& sel, bool truncated);

/// The hierarchical functions as composites (truncated or not), in the
/// order of sel.active().
std::vector<CompositeFunction> hb_functions(const HierarchySelection& sel, bool truncated);

}  // namespace lrkit

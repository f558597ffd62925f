#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lrkit/box.hpp"

namespace lrkit {

/// One refinement request, translated to each method:
///   Local: LR inserts the segment s = const over [t-w, t+w]; T-splines
///     insert the anchor (s, t); HB refines the box [s-w, s+w] x [t-w, t+w]
///     at the level below the one that introduces s.
///   Global: every method bisects all cells of its finest level.
struct GrowthStep {
  enum class Kind { Local, Global } kind = Kind::Local;
  double s = 0, t = 0, half_width = 0;
};

/// Uniform bivariate start space.
struct GrowthBase {
  Box domain;
  std::vector<int> cells;
  std::vector<int> degrees;
};

/// Collection sizes after a step; nullopt marks a method that could not
/// express this or an earlier step.
struct GrowthRow {
  std::optional<std::size_t> hb, thb, lr, ts;
};

/// Row 0 is the start space, then one row per step. HB counts active
/// functions, THB the terms of the expanded truncated collection, TS
/// the semi-standard T-spline anchors (bicubic only).
std::vector<GrowthRow> growth_compare(const GrowthBase& base, const std::vector<GrowthStep>& steps);

/// Fixed-width table, "-" for not applicable.
std::string format_growth(const std::vector<GrowthRow>& rows);

}  // namespace lrkit

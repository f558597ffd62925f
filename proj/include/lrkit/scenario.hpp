#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "lrkit/formats.hpp"
#include "lrkit/splinecore.hpp"

namespace lrkit {

/// A refinement run with embedded expectations (.scn). Line oriented:
///
///   degrees <p_1> ... <p_d>
///   uniform <dir> <lo> <hi> <cells>      clamped uniform knots
///   knots <dir> <v_1> ... <v_n>          explicit knots
///
/// then, in order, steps, expectations and view switches:
///
///   lr-meshrectangle <dir> <value> <lo> <hi> [...] [multiplicity]
///   structured <x_1> ... <x_d>           bisect supports containing x
///   hb-region <level> <lo_1> <hi_1> ... <lo_d> <hi_d>
///   ts-anchor <s> <t> [<s> <t> ...]      one semi-standard insertion
///   local <s> <t> <w> | global           growth comparison steps
///   collection hb|thb                    hierarchical view for checks
///   expect <key> <op> <value>            op is one of = < > <= >=
///
/// A scenario uses one family of steps: LR (meshrectangle, structured),
/// hierarchical, T-spline or growth.
struct Scenario {
  enum class Engine { LR, HB, TS, Growth };
  struct Item {
    enum class Kind { Step, Expect, View };
    Kind kind = Kind::Step;
    std::string name;
    std::vector<std::string> args;
    std::size_t line = 0;
  };

  std::vector<int> degrees;
  std::vector<KnotVector> knots;
  std::vector<int> uniform_cells;  // per direction, 0 when not uniform
  Engine engine = Engine::LR;
  std::vector<Item> items;
};

/// Parse errors carry the line number.
Scenario parse_scenario(std::string_view text);

struct ScenarioResult {
  std::string report;
  std::size_t failed = 0;  // expectations not met
  /// Final collection, control values lifted to R^3. Empty for growth runs.
  LRSplineDocument document;
};

ScenarioResult run_scenario(const Scenario& s);

}  // namespace lrkit

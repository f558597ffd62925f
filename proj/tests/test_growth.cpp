#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lrkit/growth.hpp"
#include "lrkit/splinecore.hpp"

using namespace lrkit;

namespace {

GrowthBase bicubic(int cells) { return {Box{{{0, double(cells)}, {0, double(cells)}}}, {cells, cells}, {3, 3}}; }

/// Hierarchical count after one level-0 refinement of `region`, by direct
/// enumeration of coarse and fine uniform bases.
std::size_t hb_oracle(int cells, const Box& region) {
  const auto coarse = KnotVector::clamped_uniform(0, cells, cells, 3);
  const auto fine = KnotVector::clamped_uniform(0, cells, 2 * cells, 3);
  std::size_t n = 0;
  for (int i = 0; i < coarse.dimension(); ++i)
    for (int j = 0; j < coarse.dimension(); ++j)
      if (!region.contains(Box{{coarse.local(i).support(), coarse.local(j).support()}})) ++n;
  for (int i = 0; i < fine.dimension(); ++i)
    for (int j = 0; j < fine.dimension(); ++j)
      if (region.contains(Box{{fine.local(i).support(), fine.local(j).support()}})) ++n;
  return n;
}

}  // namespace

TEST_CASE("empty scenario gives the start counts") {
  const auto rows = growth_compare(bicubic(8), {});
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].hb == 121u);
  CHECK(rows[0].thb == 121u);
  CHECK(rows[0].lr == 121u);
  CHECK(rows[0].ts == 121u);
}

TEST_CASE("single localized insertion") {
  const auto rows = growth_compare(bicubic(8), {{GrowthStep::Kind::Local, 3.5, 4, 2}});
  REQUIRE(rows.size() == 2);
  const auto& r = rows[1];
  REQUIRE(r.hb);
  REQUIRE(r.lr);
  REQUIRE(r.ts);
  CHECK(*r.hb == hb_oracle(8, Box{{{1.5, 5.5}, {2, 6}}}));
  CHECK(*r.lr - 121 <= 4);
  CHECK(*r.ts - 121 <= 4);
  CHECK(*r.hb > *r.lr);
  CHECK(*r.hb > *r.ts);
  CHECK(*r.thb >= *r.hb);
}

TEST_CASE("global refinement reaches the tensor count") {
  const GrowthStep g{GrowthStep::Kind::Global};
  const auto rows = growth_compare(bicubic(4), {g, g});
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 1; i < 3; ++i) {
    const std::size_t n = (4u << i) + 3;
    CHECK(rows[i].hb == n * n);
    CHECK(rows[i].thb == n * n);
    CHECK(rows[i].lr == n * n);
    CHECK(rows[i].ts == n * n);
  }
}

TEST_CASE("five localized steps") {
  std::vector<GrowthStep> steps;
  for (const auto& [s, t] : std::vector<std::pair<double, double>>{{2.5, 2}, {5.5, 5}, {2.5, 6}, {5.5, 2}, {3.5, 4}})
    steps.push_back({GrowthStep::Kind::Local, s, t, 2});
  const auto rows = growth_compare(bicubic(8), steps);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].hb);
    CHECK(*rows[i].hb > *rows[i].lr);
    CHECK(*rows[i].hb > *rows[i].ts);
    CHECK(*rows[i].hb >= *rows[i - 1].hb);
  }
  const auto table = format_growth(rows);
  CHECK(table.find("HB") != std::string::npos);
  CHECK(std::count(table.begin(), table.end(), '\n') == 7);
}

TEST_CASE("methods that cannot follow are marked") {
  // 2.3 is not a dyadic line: hierarchical refinement cannot express it.
  auto rows = growth_compare(bicubic(8), {{GrowthStep::Kind::Local, 2.3, 4, 2}});
  CHECK_FALSE(rows[1].hb);
  CHECK_FALSE(rows[1].thb);
  CHECK(rows[1].lr);
  CHECK(rows[1].ts);
  // T-splines are bicubic only.
  rows = growth_compare({Box{{{0, 4}, {0, 4}}}, {4, 4}, {2, 2}}, {});
  CHECK_FALSE(rows[0].ts);
  CHECK(rows[0].lr == 36u);
  CHECK(format_growth(rows).find('-') != std::string::npos);
}

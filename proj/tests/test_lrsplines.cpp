#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "lrkit/diagnostics.hpp"
#include "lrkit/lrsplines.hpp"
#include "support/builders.hpp"

using namespace lrkit;

TEST_CASE("from_tensor counts and scaling") {
  auto c = build::uniform_lr(4, 3);
  CHECK(c.splines.size() == 49);
  for (const auto& m : c.splines.members) CHECK(m.gamma == 1);
  CHECK(c.splines.independence == Independence::Independent);

  auto v = from_tensor(std::vector<KnotVector>(3, KnotVector::clamped_uniform(0, 2, 2, 2)));
  CHECK(v.splines.size() == 64);

  auto one = from_tensor({KnotVector({0, 1}, 0), KnotVector({0, 1}, 0)});
  CHECK(one.splines.size() == 1);
  CHECK(partition_of_unity(one.splines, 10).max_deviation == 0.0);

  CHECK_THROWS_AS(from_tensor({KnotVector({0, 0, 1, 1}, 1)}, {1.0, 2.0, 3.0}, 1), Error);
}

TEST_CASE("figure scenario: local insertion, then a multiplicity-two segment") {
  auto c = build::uniform_lr(10, 3);
  auto r1 = refine(c, {0, 3.5, {{2, 6}}, 1});
  CHECK(r1.last.split == 4);
  CHECK(r1.last.produced == 5);
  CHECK(r1.splines.size() == 13 * 13 - 4 + 5);

  auto r2 = refine(r1, {1, 4, {{2, 5}}, 2});
  CHECK(r2.last.split == 1);
  CHECK(r2.last.produced == 2);
  for (const auto* s : {&r1, &r2}) {
    CHECK(partition_of_unity(s->splines, 40).exact);
    for (const auto& m : s->splines.members) CHECK(minimal_support(m.bspline, s->mesh));
  }
}

TEST_CASE("full-extent insertion equals global knot insertion") {
  std::mt19937_64 rng(1);
  KnotVector kx = KnotVector::clamped_uniform(0, 5, 5, 3), ky = KnotVector::clamped_uniform(0, 4, 4, 2);
  const std::size_t nx = static_cast<std::size_t>(kx.dimension()), ny = static_cast<std::size_t>(ky.dimension());
  std::vector<double> coef(nx * ny);
  std::normal_distribution<double> n;
  for (auto& v : coef) v = n(rng);
  auto c = from_tensor({kx, ky}, coef, 1);
  auto r = refine(c, {0, 2.25, {{0, 4}}, 1});

  // Oracle: refine the knot vector and push every row through the matrix.
  std::vector<double> fv = kx.values();
  fv.insert(std::upper_bound(fv.begin(), fv.end(), 2.25), 2.25);
  KnotVector fine(fv, 3);
  auto A = oslo_refine(kx, fine);
  std::vector<double> fc;
  std::vector<std::vector<double>> rows(ny);
  for (std::size_t j = 0; j < ny; ++j)
    rows[j] = A.apply(std::vector<double>(coef.begin() + static_cast<std::ptrdiff_t>(j * nx),
                                          coef.begin() + static_cast<std::ptrdiff_t>((j + 1) * nx)));
  for (std::size_t j = 0; j < ny; ++j) fc.insert(fc.end(), rows[j].begin(), rows[j].end());
  auto expect = from_tensor({fine, ky}, fc, 1);

  REQUIRE(r.splines.size() == expect.splines.size());
  for (std::size_t i = 0; i < r.splines.size(); ++i) {
    CHECK(r.splines.members[i].bspline == expect.splines.members[i].bspline);
    CHECK(r.splines.members[i].gamma == 1);
    CHECK(std::abs(r.splines.members[i].coef[0] - expect.splines.members[i].coef[0]) < 1e-12);
  }
  CHECK(r.mesh == expect.mesh);
}

TEST_CASE("refine rejects insertions that split nothing") {
  auto c = build::uniform_lr(4, 3);
  try {
    refine(c, {0, 2, {{0, 4}}, 1});
    FAIL("expected no-split");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoSplit);
  }
  // Too short to cover any support.
  CHECK_THROWS_AS(refine(c, {0, 2.5, {{1, 2}}, 1}), Error);
}

TEST_CASE("structured refinement") {
  auto c = build::uniform_lr(6, 3);
  std::size_t centre = 0;
  for (std::size_t i = 0; i < c.splines.size(); ++i)
    if (support_box(c.splines.members[i].bspline) == Box{{{1, 5}, {1, 5}}}) centre = i;
  auto s = structured_refine(c, {centre}, {true});
  CHECK(s.splines.independence == Independence::Independent);
  for (double v : {1.5, 2.5, 3.5, 4.5}) {
    const double mid[1] = {3.0};
    CHECK(s.mesh.multiplicity_at(0, v, mid) == 1);
    CHECK(s.mesh.multiplicity_at(1, v, mid) == 1);
  }
  const double outside[1] = {0.5};
  CHECK(s.mesh.multiplicity_at(0, 2.5, outside) == 0);

  std::vector<std::size_t> all(c.splines.size());
  std::iota(all.begin(), all.end(), 0);
  auto g = structured_refine(c, all);
  auto dyadic = from_tensor(std::vector<KnotVector>(2, KnotVector::clamped_uniform(0, 6, 12, 3)));
  REQUIRE(g.splines.size() == dyadic.splines.size());
  for (std::size_t i = 0; i < g.splines.size(); ++i) {
    CHECK(g.splines.members[i].bspline == dyadic.splines.members[i].bspline);
    CHECK(g.splines.members[i].gamma == 1);
    for (std::size_t k = 0; k < 2; ++k)
      CHECK(std::abs(g.splines.members[i].coef[k] - dyadic.splines.members[i].coef[k]) < 1e-12);
  }
  CHECK_THROWS_AS(structured_refine(c, {}), Error);
}

TEST_CASE("minimal support and anchors") {
  auto c = build::uniform_lr(8, 3);
  for (const auto& m : c.splines.members) CHECK(minimal_support(m.bspline, c.mesh));
  TensorBSpline b({LocalKnots({0, 1, 2, 3, 4}, 3), LocalKnots({0, 1, 2, 3, 4}, 3)});
  CHECK_FALSE(minimal_support(b, c.mesh.insert({0, 2.5, {{0, 8}}, 1})));
  CHECK(minimal_support(b, c.mesh.insert({0, 2.5, {{0, 2}}, 1})));

  CHECK(anchor(b) == std::vector<double>{2, 2});
  TensorBSpline q({LocalKnots({0, 1, 2, 3}, 2), LocalKnots({0, 1, 2, 3}, 2)});
  CHECK(anchor(q) == std::vector<double>{1.5, 1.5});
  CHECK(anchor(TensorBSpline({LocalKnots({0, 1, 2}, 1)})) == std::vector<double>{1});
}

TEST_CASE("property: random refinements keep the invariants") {
  std::mt19937_64 rng(99);
  auto c = build::uniform_lr(6, 3);
  c.splines = build::with_random_coefficients(rng, c.splines);
  const auto pts = build::random_points(rng, c.mesh.domain(), 300);
  for (int step = 0; step < 12; ++step) {
    auto next = refine(c, build::random_split(rng, c));
    CHECK(partition_of_unity(next.splines, 30).max_deviation < 1e-10);
    CHECK(build::max_deviation(c.splines, next.splines, pts) < 1e-10);
    for (const auto& m : next.splines.members) CHECK(minimal_support(m.bspline, next.mesh));
    CHECK(nestedness(c.splines, next.splines).nested);
    CHECK(polynomial_reproduction(next.splines, next.mesh.elements()) ==
          std::vector<bool>(next.mesh.elements().size(), true));
    c = std::move(next);
  }
}

TEST_CASE("property: insertion order does not change the result") {
  std::mt19937_64 rng(3);
  auto base = build::uniform_lr(6, 2);
  base.splines = build::with_random_coefficients(rng, base.splines, 2);
  std::vector<MeshRectangle> rs;
  auto c = base;
  for (int i = 0; i < 8; ++i) {
    rs.push_back(build::random_split(rng, c));
    c = refine(c, rs.back());
  }
  for (int perm = 0; perm < 4; ++perm) {
    std::shuffle(rs.begin(), rs.end(), rng);
    auto other = refine_all(base, rs);
    CHECK(other.mesh == c.mesh);
    REQUIRE(other.splines.size() == c.splines.size());
    for (std::size_t i = 0; i < c.splines.size(); ++i) {
      CHECK(other.splines.members[i].bspline == c.splines.members[i].bspline);
      CHECK(other.splines.members[i].gamma == c.splines.members[i].gamma);
      for (std::size_t k = 0; k < 2; ++k)
        CHECK(std::abs(other.splines.members[i].coef[k] - c.splines.members[i].coef[k]) < 1e-12);
    }
  }
}

TEST_CASE("rational collections refine without changing geometry") {
  std::mt19937_64 rng(12);
  auto c = build::uniform_lr(5, 2);
  c.splines = build::with_random_coefficients(rng, c.splines);
  c.splines.rational = true;
  std::uniform_real_distribution<double> w(0.5, 2.0);
  for (auto& m : c.splines.members) m.weight = w(rng);
  const auto pts = build::random_points(rng, c.mesh.domain(), 300);
  auto r = refine(c, {0, 2.5, {{0, 5}}, 1});
  r = refine(r, {1, 1.5, {{1, 4}}, 1});
  CHECK(build::max_deviation(c.splines, r.splines, pts) < 1e-10);
  r.splines.validate();
}

TEST_CASE("trivariate refinement") {
  std::mt19937_64 rng(6);
  auto c = build::uniform_lr(3, 2, 3);
  c.splines = build::with_random_coefficients(rng, c.splines);
  const auto pts = build::random_points(rng, c.mesh.domain(), 200);
  auto r = refine(c, {2, 1.5, {{0, 3}, {0, 2}}, 1});
  CHECK(r.last.split > 0);
  CHECK(partition_of_unity(r.splines, 8).exact);
  CHECK(build::max_deviation(c.splines, r.splines, pts) < 1e-10);
  CHECK(nestedness(c.splines, r.splines).nested);
}

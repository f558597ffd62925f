#include "lrkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <unordered_map>

#include "lrkit/error.hpp"

namespace lrkit {

SplineGeometry::SplineGeometry(SplineCollection c) {
  c.validate();
  require(c.coef_dim == 3, ErrorCode::Validation, "geometry: control points must be in R^3");
  require(c.dim >= 1 && c.dim <= 3, ErrorCode::Validation, "geometry: parametric dimension must be 1..3");
  require(!c.members.empty(), ErrorCode::Validation, "geometry: empty collection");
  for (const auto& m : c.members)
    require(m.weight > 0 && m.coef.size() == 3, ErrorCode::Validation, "geometry: bad member");
  c_ = std::make_shared<const SplineCollection>(std::move(c));
  domain_ = c_->domain();

  // Cells of the grid of all knot values; each member overlaps a block of
  // them, so a point only visits the members of its cell.
  auto index = std::make_shared<Index>();
  const std::size_t d = c_->dim;
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<double> b;
    for (const auto& m : c_->members)
      for (double t : m.bspline.knots(k).values()) b.push_back(t);
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    index->breaks.push_back(std::move(b));
  }
  std::size_t total = 1;
  for (const auto& b : index->breaks) total *= b.size() - 1;
  index->cells.resize(total);
  for (std::size_t i = 0; i < c_->members.size(); ++i) {
    const auto& m = c_->members[i];
    index->scale.push_back(m.gamma.get_d() * m.weight);
    std::vector<std::size_t> lo(d), hi(d), at(d);
    for (std::size_t k = 0; k < d; ++k) {
      const auto& b = index->breaks[k];
      lo[k] = static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), m.bspline.knots(k).front()) - b.begin());
      hi[k] = static_cast<std::size_t>(std::lower_bound(b.begin(), b.end(), m.bspline.knots(k).back()) - b.begin());
    }
    at = lo;
    for (bool done = false; !done;) {
      std::size_t flat = 0;
      for (std::size_t k = d; k-- > 0;) flat = flat * (index->breaks[k].size() - 1) + at[k];
      index->cells[flat].push_back(i);
      done = true;
      for (std::size_t k = 0; k < d; ++k)
        if (++at[k] < hi[k]) {
          done = false;
          break;
        } else
          at[k] = lo[k];
    }
  }
  index_ = std::move(index);
}

const std::vector<std::size_t>& SplineGeometry::candidates(std::span<const double> u, std::vector<Side>& sides) const {
  const std::size_t d = dim();
  require(u.size() == d, ErrorCode::InvalidInput, "geometry: dimension mismatch");
  require(domain_.contains(u), ErrorCode::OutOfDomain, "geometry: parameter outside the domain");
  sides.assign(d, Side::Right);
  std::size_t flat = 0;
  for (std::size_t k = d; k-- > 0;) {
    const auto& b = index_->breaks[k];
    std::size_t cell;
    if (u[k] == domain_[k].hi) {
      sides[k] = Side::Left;
      cell = b.size() - 2;
    } else {
      cell = static_cast<std::size_t>(std::upper_bound(b.begin(), b.end(), u[k]) - b.begin()) - 1;
    }
    flat = flat * (b.size() - 1) + cell;
  }
  return index_->cells[flat];
}

Vec3 SplineGeometry::point(std::span<const double> u) const {
  std::vector<Side> sides;
  const auto& near = candidates(u, sides);
  const std::size_t d = dim();
  Vec3 num{};
  double den = 0;
  for (std::size_t i : near) {
    const auto& m = c_->members[i];
    double b = index_->scale[i];
    for (std::size_t k = 0; k < d && b != 0; ++k) b *= eval_bspline(m.bspline.knots(k), u[k], sides[k]);
    if (b == 0) continue;
    den += b;
    for (std::size_t r = 0; r < 3; ++r) num[r] += b * m.coef[r];
  }
  if (!c_->rational) return num;
  require(den != 0, ErrorCode::Inconsistency, "geometry: zero denominator");
  for (auto& x : num) x /= den;
  return num;
}

SplineGeometry::Jet SplineGeometry::jet(std::span<const double> u) const {
  std::vector<Side> sides;
  const auto& near = candidates(u, sides);
  const std::size_t d = dim();

  Vec3 num{};
  double den = 0;
  std::vector<Vec3> dnum(d, Vec3{});
  std::vector<double> dden(d, 0.0);
  std::vector<double> val(d), der(d);
  for (std::size_t i : near) {
    const auto& m = c_->members[i];
    bool zero = false;
    for (std::size_t k = 0; k < d; ++k) {
      val[k] = eval_bspline(m.bspline.knots(k), u[k], sides[k]);
      der[k] = eval_bspline_derivative(m.bspline.knots(k), u[k], 1, sides[k]);
      zero = zero || (val[k] == 0 && der[k] == 0);
    }
    if (zero) continue;
    const double s = index_->scale[i];
    double b = s;
    for (std::size_t k = 0; k < d; ++k) b *= val[k];
    den += b;
    for (std::size_t r = 0; r < 3; ++r) num[r] += b * m.coef[r];
    for (std::size_t k = 0; k < d; ++k) {
      double db = s * der[k];
      for (std::size_t j = 0; j < d; ++j)
        if (j != k) db *= val[j];
      dden[k] += db;
      for (std::size_t r = 0; r < 3; ++r) dnum[k][r] += db * m.coef[r];
    }
  }
  Jet out;
  out.partials.assign(d, Vec3{});
  if (!c_->rational) {
    out.point = num;
    out.partials = dnum;
    return out;
  }
  require(den != 0, ErrorCode::Inconsistency, "geometry: zero denominator");
  for (std::size_t r = 0; r < 3; ++r) out.point[r] = num[r] / den;
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t r = 0; r < 3; ++r) out.partials[k][r] = (dnum[k][r] - out.point[r] * dden[k]) / den;
  return out;
}

Vec3 eval_geometry(const SplineGeometry& g, std::span<const double> u) { return g.point(u); }

SplineCollection with_greville_points(SplineCollection c) {
  c.coef_dim = 3;
  for (auto& m : c.members) {
    m.coef.assign(3, 0.0);
    for (std::size_t k = 0; k < m.bspline.dim() && k < 3; ++k) {
      const auto& t = m.bspline.knots(k);
      const int p = t.degree();
      double g = 0;
      if (p == 0) g = 0.5 * (t.front() + t.back());
      else {
        for (int i = 1; i <= p; ++i) g += t[static_cast<std::size_t>(i)];
        g /= p;
      }
      m.coef[k] = g;
    }
  }
  return c;
}

SplineGeometry extract_isocurve(const SplineGeometry& g, std::size_t direction, double value) {
  const auto& c = g.collection();
  require(direction < c.dim && c.dim >= 2, ErrorCode::InvalidInput, "extract_isocurve: bad direction");
  const Interval& side = g.domain()[direction];
  require(side.lo <= value && value <= side.hi, ErrorCode::OutOfDomain, "extract_isocurve: value outside the domain");
  const Side s = value == side.hi ? Side::Left : Side::Right;
  const Rational v = exact(value);

  std::vector<int> degrees = c.degrees;
  degrees.erase(degrees.begin() + static_cast<std::ptrdiff_t>(direction));
  CollectionBuilder builder(c.dim - 1, degrees, 3, c.rational);
  for (const auto& m : c.members) {
    const auto& kk = m.bspline.knots(direction);
    if (value < kk.front() || value > kk.back()) continue;
    const Rational f = eval_bspline_exact(kk, v, s);
    if (f == 0) continue;
    std::vector<LocalKnots> rest = m.bspline.all_knots();
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(direction));
    builder.add(TensorBSpline(std::move(rest)), m.gamma * f, m.coef, m.weight);
  }
  return SplineGeometry(builder.build(Independence::NotTested));
}

Vec3 eval_curve(const BSplineCurve& c, double x) {
  const Interval d = c.knots.domain();
  require(d.lo <= x && x <= d.hi, ErrorCode::OutOfDomain, "eval_curve: parameter outside the domain");
  const Side side = x == d.hi ? Side::Left : Side::Right;
  Vec3 num{};
  double den = 0;
  for (int j = 0; j < c.knots.dimension(); ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const double b = eval_bspline(c.knots.local(j), x, side);
    if (b == 0) continue;
    const double w = c.weights.empty() ? 1.0 : c.weights[uj];
    den += w * b;
    for (std::size_t r = 0; r < 3; ++r) num[r] += w * b * c.points[uj][r];
  }
  if (!c.weights.empty())
    for (auto& v : num) v /= den;
  return num;
}

BSplineCurve to_minimal_basis(const SplineGeometry& curve) {
  const auto& c = curve.collection();
  require(c.dim == 1, ErrorCode::InvalidInput, "to_minimal_basis: not a curve");
  const int p = c.degrees[0];
  std::map<double, int> mult;
  for (const auto& m : c.members) {
    const auto& kk = m.bspline.knots(0);
    require(kk.degree() == p, ErrorCode::InvalidInput, "to_minimal_basis: mixed degrees");
    std::map<double, int> local;
    for (double v : kk.values()) ++local[v];
    for (const auto& [v, n] : local) mult[v] = std::max(mult[v], n);
  }
  std::vector<double> values;
  for (const auto& [v, n] : mult) values.insert(values.end(), static_cast<std::size_t>(n), v);
  BSplineCurve out{KnotVector(values, p), {}, {}};
  const auto n = static_cast<std::size_t>(out.knots.dimension());
  std::vector<Vec3> num(n, Vec3{});
  std::vector<double> w(n, 0.0);
  for (const auto& m : c.members) {
    const double s = m.gamma.get_d() * m.weight;
    for (const auto& [j, a] : expand_in(m.bspline.knots(0), out.knots)) {
      const auto uj = static_cast<std::size_t>(j);
      const double f = s * a.get_d();
      w[uj] += f;
      for (std::size_t r = 0; r < 3; ++r) num[uj][r] += f * m.coef[r];
    }
  }
  if (c.rational) {
    for (std::size_t j = 0; j < n; ++j) {
      require(w[j] > 0, ErrorCode::Inconsistency, "to_minimal_basis: uncovered basis function");
      for (auto& v : num[j]) v /= w[j];
    }
    out.weights = std::move(w);
  }
  out.points = std::move(num);
  return out;
}

namespace {

std::vector<double> breakpoints(const SplineCollection& c, const Box& domain, std::size_t k) {
  std::vector<double> v;
  for (const auto& m : c.members)
    for (double x : m.bspline.knots(k).values())
      if (domain[k].lo <= x && x <= domain[k].hi) v.push_back(x);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<double> subdivide(const std::vector<double>& b, int n) {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < b.size(); ++i)
    for (int j = 0; j < n; ++j) out.push_back(b[i] + (b[i + 1] - b[i]) * j / n);
  out.push_back(b.back());
  return out;
}

Vec3 mid(const Vec3& a, const Vec3& b) { return {(a[0] + b[0]) / 2, (a[1] + b[1]) / 2, (a[2] + b[2]) / 2}; }

}  // namespace

TriangleSoup tessellate(const SplineGeometry& g, double tolerance) {
  require(tolerance > 0, ErrorCode::InvalidInput, "tessellate: tolerance must be positive");
  require(g.dim() == 2, ErrorCode::InvalidInput, "tessellate: surface required");
  const auto b0 = breakpoints(g.collection(), g.domain(), 0), b1 = breakpoints(g.collection(), g.domain(), 1);
  auto at = [&](double u, double v) { return eval_geometry(g, std::array<double, 2>{u, v}); };

  for (int n = 1;; n *= 2) {
    const auto u = subdivide(b0, n), v = subdivide(b1, n);
    require(u.size() * v.size() < 4'000'000, ErrorCode::InvalidInput, "tessellate: tolerance too small");
    std::vector<std::vector<Vec3>> p(u.size(), std::vector<Vec3>(v.size()));
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) p[i][j] = at(u[i], v[j]);

    TriangleSoup soup;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < u.size() && ok; ++i)
      for (std::size_t j = 0; j + 1 < v.size() && ok; ++j) {
        // Counter-clockwise in (u, v), so normals follow du x dv.
        const std::array<std::array<std::size_t, 2>, 4> q{{{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}}};
        for (const auto& tri : {std::array<int, 3>{0, 1, 2}, std::array<int, 3>{0, 2, 3}}) {
          std::array<Vec3, 3> xyz;
          std::array<std::array<double, 2>, 3> uv;
          for (int r = 0; r < 3; ++r) {
            const auto& ij = q[static_cast<std::size_t>(tri[static_cast<std::size_t>(r)])];
            xyz[static_cast<std::size_t>(r)] = p[ij[0]][ij[1]];
            uv[static_cast<std::size_t>(r)] = {u[ij[0]], v[ij[1]]};
          }
          // Chordal test at edge midpoints and the centroid.
          for (int e = 0; e < 4 && ok; ++e) {
            Vec3 chord;
            std::array<double, 2> par;
            if (e < 3) {
              const auto a = static_cast<std::size_t>(e), b = static_cast<std::size_t>((e + 1) % 3);
              chord = mid(xyz[a], xyz[b]);
              par = {(uv[a][0] + uv[b][0]) / 2, (uv[a][1] + uv[b][1]) / 2};
            } else {
              for (std::size_t r = 0; r < 3; ++r) chord[r] = (xyz[0][r] + xyz[1][r] + xyz[2][r]) / 3;
              par = {(uv[0][0] + uv[1][0] + uv[2][0]) / 3, (uv[0][1] + uv[1][1] + uv[2][1]) / 3};
            }
            ok = norm(at(par[0], par[1]) - chord) <= tolerance;
          }
          soup.triangles.push_back({xyz, facet_normal(xyz), 0});
        }
      }
    if (ok) return soup;
  }
}

double Polyline::length() const {
  double l = 0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) l += norm(points[i + 1] - points[i]);
  if (closed && points.size() > 1) l += norm(points.front() - points.back());
  return l;
}

Slice slice(const TriangleSoup& soup, double h, double tolerance) {
  Slice out;
  std::vector<double> zs;
  for (const auto& t : soup.triangles)
    for (const auto& p : t.v) zs.push_back(p[2]);
  std::sort(zs.begin(), zs.end());
  while (std::binary_search(zs.begin(), zs.end(), h)) {
    h = std::nextafter(h, HUGE_VAL);
    out.perturbed = true;
  }
  out.height = h;

  std::vector<std::array<Vec3, 2>> segs;
  for (const auto& t : soup.triangles) {
    std::vector<Vec3> cut;
    for (std::size_t e = 0; e < 3; ++e) {
      const Vec3& a = t.v[e];
      const Vec3& b = t.v[(e + 1) % 3];
      if ((a[2] - h) * (b[2] - h) >= 0) continue;
      const double s = (h - a[2]) / (b[2] - a[2]);
      cut.push_back({a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]), h});
    }
    if (cut.size() == 2) segs.push_back({cut[0], cut[1]});
  }
  // Near-vertex cuts can collapse to a point; chaining bridges them anyway.
  std::erase_if(segs, [&](const auto& s) { return std::hypot(s[0][0] - s[1][0], s[0][1] - s[1][1]) <= tolerance; });
  for (auto& s : segs)
    if (s[1] < s[0]) std::swap(s[0], s[1]);
  std::sort(segs.begin(), segs.end());

  // Endpoint lookup on a grid of cell size `tolerance`.
  const double cell = std::max(tolerance, 1e-300);
  auto key = [&](const Vec3& p) {
    return std::pair<long long, long long>{static_cast<long long>(std::floor(p[0] / cell)),
                                           static_cast<long long>(std::floor(p[1] / cell))};
  };
  struct Hash {
    std::size_t operator()(const std::pair<long long, long long>& k) const {
      return std::hash<long long>()(k.first) * 1000003u ^ std::hash<long long>()(k.second);
    }
  };
  std::unordered_map<std::pair<long long, long long>, std::vector<std::size_t>, Hash> grid;
  for (std::size_t i = 0; i < segs.size(); ++i)
    for (std::size_t e = 0; e < 2; ++e) grid[key(segs[i][e])].push_back(2 * i + e);
  std::vector<bool> used(segs.size(), false);
  auto close = [&](const Vec3& a, const Vec3& b) { return std::hypot(a[0] - b[0], a[1] - b[1]) <= tolerance; };
  auto next = [&](const Vec3& p) -> std::optional<std::size_t> {
    const auto [kx, ky] = key(p);
    std::optional<std::size_t> best;
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        const auto it = grid.find({kx + dx, ky + dy});
        if (it == grid.end()) continue;
        for (std::size_t id : it->second)
          if (!used[id / 2] && close(p, segs[id / 2][id % 2]) && (!best || id < *best)) best = id;
      }
    return best;
  };

  for (std::size_t s = 0; s < segs.size(); ++s) {
    if (used[s]) continue;
    used[s] = true;
    std::vector<Vec3> chain{segs[s][0], segs[s][1]};
    bool closed = false;
    while (true) {
      if (chain.size() > 2 && close(chain.back(), chain.front())) {
        chain.pop_back();
        closed = true;
        break;
      }
      const auto id = next(chain.back());
      if (!id) break;
      used[*id / 2] = true;
      chain.push_back(segs[*id / 2][1 - *id % 2]);
    }
    if (!closed) {
      std::vector<Vec3> front;
      for (auto id = next(chain.front()); id; id = next(front.back())) {
        used[*id / 2] = true;
        front.push_back(segs[*id / 2][1 - *id % 2]);
      }
      std::reverse(front.begin(), front.end());
      chain.insert(chain.begin(), front.begin(), front.end());
    }
    out.polylines.push_back({std::move(chain), closed});
  }
  return out;
}

}  // namespace lrkit

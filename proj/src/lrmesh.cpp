#include "lrkit/lrmesh.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "lrkit/error.hpp"

namespace lrkit {

Box MeshRectangle::box() const {
  Box b;
  std::size_t e = 0;
  for (std::size_t k = 0; k < dim(); ++k)
    b.sides.push_back(k == direction ? Interval{value, value} : extent[e++]);
  return b;
}

std::vector<Interval> MeshRectangle::transverse(const Box& box, std::size_t direction) {
  std::vector<Interval> t;
  for (std::size_t k = 0; k < box.dim(); ++k)
    if (k != direction) t.push_back(box[k]);
  return t;
}

namespace {

bool extent_contains(const std::vector<Interval>& ext, std::span<const double> x) {
  for (std::size_t a = 0; a < ext.size(); ++a)
    if (!ext[a].contains(x[a])) return false;
  return true;
}

int plane_multiplicity(const std::vector<MeshRectangle>& rects, std::span<const double> x) {
  int m = 0;
  for (const auto& r : rects)
    if (extent_contains(r.extent, x)) m = std::max(m, r.multiplicity);
  return m;
}

/// Sorted breakpoints of the rectangles along transverse axis a, clipped to
/// [lo, hi] and including both ends.
std::vector<double> breakpoints(const std::vector<MeshRectangle>& rects, std::size_t a, double lo,
                                double hi) {
  std::vector<double> v{lo, hi};
  for (const auto& r : rects)
    for (double x : {r.extent[a].lo, r.extent[a].hi})
      if (lo < x && x < hi) v.push_back(x);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<double> breakpoints(const std::vector<MeshRectangle>& rects, std::size_t a) {
  std::vector<double> v;
  for (const auto& r : rects) {
    v.push_back(r.extent[a].lo);
    v.push_back(r.extent[a].hi);
  }
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

struct Run {
  Interval span;
  int multiplicity;
  auto operator<=>(const Run&) const = default;
};

/// Maximal runs of constant positive multiplicity along the last
/// transverse axis, with the other coordinate fixed at `at`.
std::vector<Run> runs(const std::vector<MeshRectangle>& rects, const std::vector<double>& grid,
                      std::vector<double> at) {
  std::vector<Run> out;
  at.push_back(0.0);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    at.back() = 0.5 * (grid[i] + grid[i + 1]);
    const int m = plane_multiplicity(rects, at);
    if (m == 0) continue;
    if (!out.empty() && out.back().multiplicity == m && out.back().span.hi == grid[i])
      out.back().span.hi = grid[i + 1];
    else
      out.push_back({{grid[i], grid[i + 1]}, m});
  }
  return out;
}

/// Canonical decomposition of a plane's piecewise-constant multiplicity.
std::vector<MeshRectangle> canonical(const std::vector<MeshRectangle>& rects) {
  const MeshRectangle& proto = rects.front();
  const std::size_t k = proto.extent.size();
  auto make = [&](std::vector<Interval> ext, int m) {
    return MeshRectangle{proto.direction, proto.value, std::move(ext), m};
  };
  std::vector<MeshRectangle> out;
  if (k == 0) {
    int m = 0;
    for (const auto& r : rects) m = std::max(m, r.multiplicity);
    out.push_back(make({}, m));
    return out;
  }
  if (k == 1) {
    for (const auto& run : runs(rects, breakpoints(rects, 0), {})) out.push_back(make({run.span}, run.multiplicity));
    return out;
  }
  // Strips along axis 0, runs along axis 1, then merge identical runs of
  // consecutive strips.
  const auto ga = breakpoints(rects, 0);
  const auto gb = breakpoints(rects, 1);
  std::map<Run, double> open;
  for (std::size_t i = 0; i + 1 < ga.size(); ++i) {
    const auto strip = runs(rects, gb, {0.5 * (ga[i] + ga[i + 1])});
    for (auto it = open.begin(); it != open.end();) {
      if (!std::binary_search(strip.begin(), strip.end(), it->first)) {
        out.push_back(make({{it->second, ga[i]}, it->first.span}, it->first.multiplicity));
        it = open.erase(it);
      } else {
        ++it;
      }
    }
    for (const auto& run : strip) open.try_emplace(run, ga[i]);
  }
  for (const auto& [run, start] : open) out.push_back(make({{start, ga.back()}, run.span}, run.multiplicity));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

BoxPartition::BoxPartition(Box domain, std::vector<int> degrees)
    : domain_(std::move(domain)), degrees_(std::move(degrees)) {
  require(domain_.dim() >= 1 && domain_.dim() <= 3, ErrorCode::InvalidInput,
          "box partition: dimension must be 1, 2 or 3");
  require(degrees_.size() == domain_.dim(), ErrorCode::InvalidInput,
          "box partition: one degree per direction");
  for (std::size_t k = 0; k < domain_.dim(); ++k) {
    require(domain_[k].lo < domain_[k].hi, ErrorCode::InvalidInput, "box partition: empty domain");
    require(degrees_[k] >= 0, ErrorCode::InvalidInput, "box partition: negative degree");
  }
}

BoxPartition BoxPartition::from_tensor_space(const std::vector<KnotVector>& knots) {
  Box domain;
  std::vector<int> degrees;
  for (const auto& kv : knots) {
    domain.sides.push_back({kv.values().front(), kv.values().back()});
    degrees.push_back(kv.degree());
  }
  BoxPartition bp(domain, degrees);
  for (std::size_t k = 0; k < knots.size(); ++k)
    for (double v : knots[k].unique_values())
      bp.insert_in_place({k, v, MeshRectangle::transverse(domain, k), knots[k].multiplicity(v)});
  return bp;
}

void BoxPartition::check(const MeshRectangle& r) const {
  require(r.dim() == dim() && r.direction < dim(), ErrorCode::InvalidInput,
          "meshrectangle: dimension mismatch");
  require(domain_[r.direction].contains(r.value), ErrorCode::InvalidInput,
          "meshrectangle: value outside the domain");
  const auto dom = MeshRectangle::transverse(domain_, r.direction);
  for (std::size_t a = 0; a < r.extent.size(); ++a) {
    require(r.extent[a].lo < r.extent[a].hi, ErrorCode::InvalidInput,
            "meshrectangle: degenerate extent");
    require(dom[a].contains(r.extent[a]), ErrorCode::InvalidInput,
            "meshrectangle: extent outside the domain");
  }
  require(r.multiplicity >= 1 && r.multiplicity <= degrees_[r.direction] + 1,
          ErrorCode::InvalidInput, "meshrectangle: multiplicity must be in 1..p+1");
}

BoxPartition BoxPartition::insert(const MeshRectangle& r) const {
  BoxPartition copy = *this;
  copy.insert_in_place(r);
  return copy;
}

void BoxPartition::insert_in_place(const MeshRectangle& r) {
  check(r);
  auto& plane = planes_[{r.direction, r.value}];
  plane.push_back(r);
  plane = canonical(plane);
}

std::vector<MeshRectangle> BoxPartition::rectangles() const {
  std::vector<MeshRectangle> out;
  for (const auto& [key, rects] : planes_) out.insert(out.end(), rects.begin(), rects.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t BoxPartition::size() const {
  std::size_t n = 0;
  for (const auto& [key, rects] : planes_) n += rects.size();
  return n;
}

int BoxPartition::multiplicity_at(std::size_t direction, double value,
                                  std::span<const double> transverse) const {
  auto it = planes_.find({direction, value});
  if (it == planes_.end()) return 0;
  return plane_multiplicity(it->second, transverse);
}

int BoxPartition::covering_multiplicity(std::size_t direction, double value, const Box& box) const {
  auto it = planes_.find({direction, value});
  if (it == planes_.end()) return 0;
  const auto& rects = it->second;
  const auto t = MeshRectangle::transverse(box, direction);
  if (t.empty()) return rects.front().multiplicity;
  std::vector<std::vector<double>> grids;
  for (std::size_t a = 0; a < t.size(); ++a) grids.push_back(breakpoints(rects, a, t[a].lo, t[a].hi));
  int m = 1 << 20;
  std::vector<double> mid(t.size());
  std::vector<std::size_t> idx(t.size(), 0);
  while (true) {
    for (std::size_t a = 0; a < t.size(); ++a) mid[a] = 0.5 * (grids[a][idx[a]] + grids[a][idx[a] + 1]);
    m = std::min(m, plane_multiplicity(rects, mid));
    if (m == 0) return 0;
    std::size_t a = 0;
    while (a < idx.size() && ++idx[a] + 1 == grids[a].size()) idx[a++] = 0;
    if (a == idx.size()) break;
  }
  return m;
}

bool BoxPartition::covers(const MeshRectangle& r) const {
  return covering_multiplicity(r.direction, r.value, r.box()) >= r.multiplicity;
}

std::vector<double> BoxPartition::values(std::size_t direction) const {
  std::vector<double> v;
  for (auto it = planes_.lower_bound({direction, -std::numeric_limits<double>::infinity()});
       it != planes_.end() && it->first.first == direction; ++it)
    v.push_back(it->first.second);
  return v;
}

std::vector<double> BoxPartition::values_between(std::size_t direction, double lo, double hi) const {
  std::vector<double> v;
  for (auto it = planes_.upper_bound({direction, lo});
       it != planes_.end() && it->first.first == direction && it->first.second < hi; ++it)
    v.push_back(it->first.second);
  return v;
}

std::vector<Box> BoxPartition::elements() const {
  const std::size_t d = dim();
  std::vector<std::vector<double>> g(d);
  for (std::size_t k = 0; k < d; ++k) {
    g[k] = values(k);
    g[k].push_back(domain_[k].lo);
    g[k].push_back(domain_[k].hi);
    std::sort(g[k].begin(), g[k].end());
    g[k].erase(std::unique(g[k].begin(), g[k].end()), g[k].end());
  }
  std::vector<std::size_t> n(d), stride(d);
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) {
    n[k] = g[k].size() - 1;
    stride[k] = total;
    total *= n[k];
  }
  std::vector<std::size_t> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  auto index_of = [&](std::size_t c, std::size_t k) { return (c / stride[k]) % n[k]; };

  // Join neighbouring cells across faces that no meshrectangle covers.
  for (std::size_t c = 0; c < total; ++c)
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t i = index_of(c, k);
      if (i + 1 >= n[k]) continue;
      std::vector<double> mid;
      for (std::size_t a = 0; a < d; ++a)
        if (a != k) {
          const std::size_t j = index_of(c, a);
          mid.push_back(0.5 * (g[a][j] + g[a][j + 1]));
        }
      if (multiplicity_at(k, g[k][i + 1], mid) == 0) parent[find(c)] = find(c + stride[k]);
    }

  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t c = 0; c < total; ++c) groups[find(c)].push_back(c);
  auto cell_box = [&](std::size_t c) {
    Box b;
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t i = index_of(c, k);
      b.sides.push_back({g[k][i], g[k][i + 1]});
    }
    return b;
  };
  std::vector<Box> out;
  for (const auto& [root, cells] : groups) {
    std::vector<std::size_t> lo(d, static_cast<std::size_t>(-1)), hi(d, 0);
    for (std::size_t c : cells)
      for (std::size_t k = 0; k < d; ++k) {
        lo[k] = std::min(lo[k], index_of(c, k));
        hi[k] = std::max(hi[k], index_of(c, k));
      }
    std::size_t span = 1;
    for (std::size_t k = 0; k < d; ++k) span *= hi[k] - lo[k] + 1;
    if (span == cells.size()) {
      Box b;
      for (std::size_t k = 0; k < d; ++k) b.sides.push_back({g[k][lo[k]], g[k][hi[k] + 1]});
      out.push_back(std::move(b));
    } else {
      // Dangling segments leave non-box regions; report their cells.
      for (std::size_t c : cells) out.push_back(cell_box(c));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

void BoxPartition::validate_clamped() const {
  for (std::size_t k = 0; k < dim(); ++k)
    for (double v : {domain_[k].lo, domain_[k].hi})
      require(covering_multiplicity(k, v, domain_) >= degrees_[k] + 1, ErrorCode::Validation,
              "box partition: boundary in direction " + std::to_string(k) +
                  " lacks full multiplicity");
}

bool splits_support(const MeshRectangle& r, const TensorBSpline& b) {
  if (r.dim() != b.dim() || r.direction >= b.dim()) return false;
  const LocalKnots& k = b.knots(r.direction);
  if (!k.support().contains_strictly(r.value)) return false;
  const auto t = MeshRectangle::transverse(support_box(b), r.direction);
  for (std::size_t a = 0; a < t.size(); ++a)
    if (!r.extent[a].contains(t[a])) return false;
  return k.multiplicity(r.value) < r.multiplicity;
}

}  // namespace lrkit

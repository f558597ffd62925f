#include "lrkit/hbsplines.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "lrkit/error.hpp"

namespace lrkit {

namespace {

/// Visits every multi-index in the box [lo, hi).
void for_each_index(const std::vector<std::pair<int, int>>& range, const std::function<bool(const MultiIndex&)>& f) {
  MultiIndex idx;
  for (const auto& r : range) {
    if (r.first >= r.second) return;
    idx.push_back(r.first);
  }
  while (true) {
    if (!f(idx)) return;
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == range[k].second) idx[k] = range[k].first, ++k;
    if (k == idx.size()) return;
  }
}

void add_into(std::map<FunctionId, Rational>& acc, const FunctionId& id, const Rational& w) {
  auto& v = acc[id];
  v += w;
  if (v == 0) acc.erase(id);
}

}  // namespace

HierarchySelection::HierarchySelection(Box domain, std::vector<int> base_cells, std::vector<int> degrees,
                                       std::vector<double> coefficients, std::size_t coef_dim, int max_level)
    : domain_(std::move(domain)),
      base_cells_(std::move(base_cells)),
      degrees_(std::move(degrees)),
      coef_dim_(coef_dim),
      max_level_(max_level) {
  const std::size_t d = domain_.dim();
  require(d >= 1 && d <= 3 && base_cells_.size() == d && degrees_.size() == d, ErrorCode::InvalidInput,
          "hierarchy: inconsistent dimensions");
  require(max_level_ >= 0 && max_level_ <= 20, ErrorCode::InvalidInput, "hierarchy: max level out of range");
  for (std::size_t k = 0; k < d; ++k)
    require(base_cells_[k] >= 1 && degrees_[k] >= 0 && domain_[k].lo < domain_[k].hi, ErrorCode::InvalidInput,
            "hierarchy: bad base space");
  for (int l = 0; l <= max_level_ + 1; ++l) {
    knots_.emplace_back();
    for (std::size_t k = 0; k < d; ++k)
      knots_.back().push_back(KnotVector::clamped_uniform(domain_[k].lo, domain_[k].hi, cells(l, k), degrees_[k]));
  }
  regions_.resize(static_cast<std::size_t>(max_level_) + 2);
  recompute_active();

  if (coefficients.empty()) {
    coef_dim_ = d;
    std::vector<std::vector<double>> g;
    for (std::size_t k = 0; k < d; ++k) g.push_back(greville_abscissae(knots_[0][k]));
    for (const auto& id : active_) {
      std::vector<double> c;
      for (std::size_t k = 0; k < d; ++k) c.push_back(g[k][static_cast<std::size_t>(id.index[k])]);
      coef_[id] = c;
    }
  } else {
    require(coef_dim_ >= 1 && coefficients.size() == active_.size() * coef_dim_, ErrorCode::InvalidInput,
            "hierarchy: coefficient count mismatch");
    // active_ is lexicographic (first direction slowest); index explicitly.
    for (const auto& id : active_) {
      std::size_t n = 0, stride = 1;
      for (std::size_t k = 0; k < d; ++k) {
        n += static_cast<std::size_t>(id.index[k]) * stride;
        stride *= static_cast<std::size_t>(knots_[0][k].dimension());
      }
      coef_[id].assign(coefficients.begin() + static_cast<std::ptrdiff_t>(n * coef_dim_),
                       coefficients.begin() + static_cast<std::ptrdiff_t>((n + 1) * coef_dim_));
    }
  }
}

int HierarchySelection::finest_level() const {
  for (int l = max_level_; l >= 1; --l)
    if (!regions_[static_cast<std::size_t>(l)].empty()) return l;
  return 0;
}

const KnotVector& HierarchySelection::knots(int level, std::size_t dir) const {
  require(level >= 0 && level <= max_level_ + 1, ErrorCode::InvalidInput, "hierarchy: level out of range");
  return knots_[static_cast<std::size_t>(level)][dir];
}

TensorBSpline HierarchySelection::function(const FunctionId& id) const {
  std::vector<LocalKnots> local;
  for (std::size_t k = 0; k < dim(); ++k) local.push_back(knots(id.level, k).local(id.index[k]));
  return TensorBSpline(std::move(local));
}

Box HierarchySelection::cell_box(int level, const MultiIndex& cell) const {
  Box b;
  for (std::size_t k = 0; k < dim(); ++k) {
    const auto& t = knots(level, k).values();
    const auto i = static_cast<std::size_t>(cell[k] + degrees_[k]);
    b.sides.push_back({t[i], t[i + 1]});
  }
  return b;
}

std::vector<MultiIndex> HierarchySelection::cells_in(int level, const Box& box) const {
  std::vector<std::pair<int, int>> range;
  for (std::size_t k = 0; k < dim(); ++k) {
    const auto& t = knots(level, k).values();
    const int n = cells(level, k);
    int lo = n, hi = 0;
    for (int i = 0; i < n; ++i) {
      const auto j = static_cast<std::size_t>(i + degrees_[k]);
      if (box[k].lo <= t[j] && t[j + 1] <= box[k].hi) {
        lo = std::min(lo, i);
        hi = std::max(hi, i + 1);
      }
    }
    range.emplace_back(lo, hi);
  }
  std::vector<MultiIndex> out;
  for_each_index(range, [&](const MultiIndex& c) {
    out.push_back(c);
    return true;
  });
  return out;
}

const std::set<MultiIndex>& HierarchySelection::region(int level) const {
  require(level >= 1 && level <= max_level_ + 1, ErrorCode::InvalidInput, "hierarchy: region level out of range");
  return regions_[static_cast<std::size_t>(level)];
}

std::vector<std::pair<int, int>> HierarchySelection::support_cells(const FunctionId& id) const {
  std::vector<std::pair<int, int>> r;
  for (std::size_t k = 0; k < dim(); ++k) {
    const int n = cells(id.level, k), p = degrees_[k], i = id.index[k];
    r.emplace_back(std::clamp(i - p, 0, n), std::clamp(i + 1, 0, n));
  }
  return r;
}

bool HierarchySelection::support_in_region(const FunctionId& id, int level) const {
  if (level == 0) return true;
  if (level > max_level_) return false;
  const auto& reg = regions_[static_cast<std::size_t>(level)];
  if (reg.empty()) return false;
  auto range = support_cells(id);
  const int scale = 1 << (level - id.level);
  for (auto& r : range) r = {r.first * scale, r.second * scale};
  bool inside = true;
  for_each_index(range, [&](const MultiIndex& c) { return inside = reg.count(c) > 0; });
  return inside;
}

bool HierarchySelection::kraft_active(const FunctionId& id) const {
  return support_in_region(id, id.level) && !support_in_region(id, id.level + 1);
}

bool HierarchySelection::is_active(const FunctionId& id) const {
  return std::binary_search(active_.begin(), active_.end(), id);
}

std::vector<std::pair<FunctionId, Rational>> HierarchySelection::children(const FunctionId& id) const {
  require(id.level < max_level_ + 1, ErrorCode::InvalidInput, "hierarchy: no finer level");
  std::vector<std::pair<FunctionId, Rational>> out{{FunctionId{id.level + 1, {}}, Rational(1)}};
  for (std::size_t k = 0; k < dim(); ++k) {
    const auto e = expand_in(knots(id.level, k).local(id.index[k]), knots(id.level + 1, k));
    std::vector<std::pair<FunctionId, Rational>> next;
    for (const auto& [fid, w] : out)
      for (const auto& [j, a] : e) {
        FunctionId c = fid;
        c.index.push_back(j);
        next.emplace_back(std::move(c), w * a);
      }
    out = std::move(next);
  }
  return out;
}

void HierarchySelection::recompute_active() {
  std::set<FunctionId> found;
  const int finest = finest_level();
  for (int l = 0; l <= finest; ++l) {
    std::set<MultiIndex> candidates;
    if (l == 0) {
      std::vector<std::pair<int, int>> all;
      for (std::size_t k = 0; k < dim(); ++k) all.emplace_back(0, knots(0, k).dimension());
      for_each_index(all, [&](const MultiIndex& i) {
        candidates.insert(i);
        return true;
      });
    } else {
      for (const auto& c : regions_[static_cast<std::size_t>(l)]) {
        std::vector<std::pair<int, int>> r;
        for (std::size_t k = 0; k < dim(); ++k)
          r.emplace_back(c[k], std::min(c[k] + degrees_[k] + 1, knots(l, k).dimension()));
        for_each_index(r, [&](const MultiIndex& i) {
          candidates.insert(i);
          return true;
        });
      }
    }
    for (const auto& i : candidates) {
      FunctionId id{l, i};
      if (kraft_active(id)) found.insert(std::move(id));
    }
  }
  active_.assign(found.begin(), found.end());
}

HierarchySelection hb_refine(const HierarchySelection& sel, int level, const std::vector<MultiIndex>& cells) {
  require(level >= 0 && level < sel.max_level(), ErrorCode::InvalidInput, "hb_refine: level out of range");
  if (cells.empty()) return sel;
  const int fine = level + 1;
  for (const auto& c : cells) {
    require(c.size() == sel.dim(), ErrorCode::InvalidInput, "hb_refine: cell dimension mismatch");
    for (std::size_t k = 0; k < sel.dim(); ++k)
      require(c[k] >= 0 && c[k] < sel.cells(fine, k), ErrorCode::InvalidInput, "hb_refine: cell out of range");
    if (level >= 1) {
      MultiIndex parent = c;
      for (auto& v : parent) v /= 2;
      require(sel.region(level).count(parent) > 0, ErrorCode::InvalidInput,
              "hb_refine: region leaves the parent level's region");
    }
  }
  HierarchySelection out = sel;
  auto& reg = out.regions_[static_cast<std::size_t>(fine)];
  reg.insert(cells.begin(), cells.end());
  out.recompute_active();

  std::map<FunctionId, std::vector<double>> coef;
  for (const auto& id : out.active_) coef[id].assign(out.coef_dim_, 0.0);
  std::function<void(const FunctionId&, const std::vector<double>&, double)> distribute =
      [&](const FunctionId& id, const std::vector<double>& c, double w) {
        if (out.is_active(id)) {
          auto& dst = coef[id];
          for (std::size_t k = 0; k < c.size(); ++k) dst[k] += w * c[k];
          return;
        }
        require(out.support_in_region(id, id.level + 1), ErrorCode::Inconsistency,
                "hb_refine: lost a deactivated function");
        for (const auto& [child, a] : out.children(id)) distribute(child, c, w * a.get_d());
      };
  for (const auto& [id, c] : sel.coef_) distribute(id, c, 1.0);
  out.coef_ = std::move(coef);
  return out;
}

HierarchySelection hb_refine(const HierarchySelection& sel, int level, const Box& region) {
  return hb_refine(sel, level, sel.cells_in(level + 1, region));
}

std::vector<TruncatedFunction> truncate(const HierarchySelection& sel) {
  const int finest = sel.finest_level();
  struct Result {
    std::map<FunctionId, Rational> terms, dropped;
    bool changed = false;
  };
  std::function<Result(const FunctionId&, const Rational&)> trunc = [&](const FunctionId& id, const Rational& w) {
    Result r;
    if (id.level >= finest) {
      r.terms[id] = w;
      return r;
    }
    for (const auto& [child, a] : sel.children(id)) {
      const Rational cw = w * a;
      if (sel.support_in_region(child, child.level)) {
        add_into(r.dropped, child, cw);
        r.changed = true;
        continue;
      }
      Result sub = trunc(child, cw);
      r.changed = r.changed || sub.changed;
      for (const auto& [t, v] : sub.terms) add_into(r.terms, t, v);
      for (const auto& [t, v] : sub.dropped) add_into(r.dropped, t, v);
    }
    if (!r.changed) {
      r.terms = {{id, w}};
      r.dropped.clear();
    }
    return r;
  };
  std::vector<TruncatedFunction> out;
  for (const auto& id : sel.active()) {
    Result r = trunc(id, Rational(1));
    out.push_back({id, {r.terms.begin(), r.terms.end()}, {r.dropped.begin(), r.dropped.end()}});
  }
  return out;
}

CompositeFunction composite(const HierarchySelection& sel, const TruncatedFunction& t) {
  CompositeFunction f;
  for (const auto& [id, w] : t.terms) f.terms.emplace_back(sel.function(id), w);
  return f;
}

bool disjoint_support_check(const HierarchySelection& sel, const TruncatedFunction& t) {
  const int finest = sel.finest_level();
  const FunctionId& base = t.base;
  auto range = sel.support_cells(base);
  const int scale = 1 << (finest - base.level);
  for (auto& r : range) r = {r.first * scale, r.second * scale};
  const std::size_t d = sel.dim();
  std::set<MultiIndex> nonzero;
  for_each_index(range, [&](const MultiIndex& cell) {
    const Box box = sel.cell_box(finest, cell);
    for (const auto& [id, w] : t.terms) {
      const TensorBSpline b = sel.function(id);
      if (!support_box(b).overlaps(box)) continue;
      std::vector<std::vector<Rational>> f;
      for (std::size_t k = 0; k < d; ++k) f.push_back(bernstein_coefficients(b.knots(k), box[k].lo, box[k].hi));
      // Terms have nonnegative weights and B-splines are nonnegative, so
      // any positive contribution makes the cell nonzero.
      bool any = true;
      for (const auto& v : f) any = any && std::any_of(v.begin(), v.end(), [](const Rational& x) { return x != 0; });
      if (any && w > 0) {
        nonzero.insert(cell);
        break;
      }
    }
    return true;
  });
  if (nonzero.size() <= 1) return true;
  // Flood fill with face and corner neighbours.
  std::set<MultiIndex> seen{*nonzero.begin()};
  std::vector<MultiIndex> stack{*nonzero.begin()};
  std::vector<std::pair<int, int>> offsets(d, {-1, 2});
  while (!stack.empty()) {
    const MultiIndex c = stack.back();
    stack.pop_back();
    for_each_index(offsets, [&](const MultiIndex& o) {
      MultiIndex n = c;
      for (std::size_t k = 0; k < d; ++k) n[k] += o[k];
      if (nonzero.count(n) && seen.insert(n).second) stack.push_back(n);
      return true;
    });
  }
  return seen.size() == nonzero.size();
}

std::map<FunctionId, std::vector<double>> thb_coefficients(const HierarchySelection& sel,
                                                           const std::vector<TruncatedFunction>& t) {
  std::map<FunctionId, const TruncatedFunction*> by_base;
  for (const auto& f : t) by_base[f.base] = &f;
  // rep(phi): coordinates of a hierarchical-domain B-spline in the
  // truncated basis. Active: phi = trunc(phi) + dropped. Otherwise its
  // support lies in the next region and it splits into children.
  std::map<FunctionId, std::map<FunctionId, Rational>> memo;
  std::function<const std::map<FunctionId, Rational>&(const FunctionId&)> rep =
      [&](const FunctionId& id) -> const std::map<FunctionId, Rational>& {
    auto it = memo.find(id);
    if (it != memo.end()) return it->second;
    std::map<FunctionId, Rational> r;
    if (sel.is_active(id)) {
      r[id] = 1;
      for (const auto& [psi, w] : by_base.at(id)->dropped)
        for (const auto& [tid, v] : rep(psi)) add_into(r, tid, w * v);
    } else {
      require(sel.support_in_region(id, id.level) && sel.support_in_region(id, id.level + 1),
              ErrorCode::Inconsistency, "thb: function outside the hierarchy");
      for (const auto& [child, a] : sel.children(id))
        for (const auto& [tid, v] : rep(child)) add_into(r, tid, a * v);
    }
    return memo.emplace(id, std::move(r)).first->second;
  };
  std::map<FunctionId, std::vector<double>> out;
  for (const auto& id : sel.active()) out[id].assign(sel.coef_dim(), 0.0);
  for (const auto& [id, c] : sel.coefficients())
    for (const auto& [tid, v] : rep(id)) {
      const double w = v.get_d();
      auto& dst = out[tid];
      for (std::size_t k = 0; k < c.size(); ++k) dst[k] += w * c[k];
    }
  return out;
}

std::vector<CompositeFunction> hb_functions(const HierarchySelection& sel, bool truncated) {
  std::vector<CompositeFunction> out;
  if (!truncated) {
    for (const auto& id : sel.active()) out.push_back({{{sel.function(id), Rational(1)}}});
    return out;
  }
  for (const auto& t : truncate(sel)) out.push_back(composite(sel, t));
  return out;
}

SplineCollection hb_to_collection(const HierarchySelection& sel, bool truncated) {
  CollectionBuilder builder(sel.dim(), sel.degrees(), sel.coef_dim(), false);
  if (!truncated) {
    for (const auto& id : sel.active()) builder.add(sel.function(id), Rational(1), sel.coefficients().at(id));
    return builder.build(Independence::Independent);
  }
  const auto t = truncate(sel);
  const auto coef = thb_coefficients(sel, t);
  for (const auto& f : t)
    for (const auto& [id, w] : f.terms) builder.add(sel.function(id), w, coef.at(f.base));
  return builder.build(Independence::NotTested);
}

}  // namespace lrkit

#include "lrkit/growth.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <set>

#include "lrkit/error.hpp"
#include "lrkit/hbsplines.hpp"
#include "lrkit/lrsplines.hpp"
#include "lrkit/tsplines.hpp"

namespace lrkit {

namespace {

std::vector<double> midpoints(const std::vector<double>& v) {
  std::vector<double> m;
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (v[i] < v[i + 1]) m.push_back(0.5 * (v[i] + v[i + 1]));
  return m;
}

/// Runs `step` while the method is still applicable; any library error
/// marks it not applicable from then on.
template <class State>
void advance(std::optional<State>& state, const std::function<State(const State&)>& step) {
  if (!state) return;
  try {
    state = step(*state);
  } catch (const Error&) {
    state.reset();
  }
}

HierarchySelection hb_step(const HierarchySelection& sel, const GrowthStep& st) {
  if (st.kind == GrowthStep::Kind::Global) {
    const int l = sel.finest_level();
    require(l == 0 || sel.cells_in(l, sel.domain()).size() == sel.region(l).size(), ErrorCode::InvalidInput,
            "growth: hierarchy is not uniform");
    return hb_refine(sel, l, sel.domain());
  }
  int level = -1;
  for (int l = 0; l <= sel.max_level(); ++l) {
    const auto u = sel.knots(l, 0).unique_values();
    if (std::binary_search(u.begin(), u.end(), st.s)) {
      level = l - 1;
      break;
    }
  }
  require(level >= 0, ErrorCode::InvalidInput, "growth: value is not a new dyadic line");
  const Box& d = sel.domain();
  const Box region{{{std::max(d[0].lo, st.s - st.half_width), std::min(d[0].hi, st.s + st.half_width)},
                    {std::max(d[1].lo, st.t - st.half_width), std::min(d[1].hi, st.t + st.half_width)}}};
  return hb_refine(sel, level, region);
}

LRCollection lr_step(const LRCollection& c, const GrowthStep& st) {
  const Box& d = c.mesh.domain();
  if (st.kind == GrowthStep::Kind::Global) {
    std::vector<MeshRectangle> rs;
    for (std::size_t k = 0; k < 2; ++k)
      for (double v : midpoints(c.mesh.values(k))) rs.push_back({k, v, {d[1 - k]}, 1});
    return refine_all(c, rs);
  }
  return refine(c, {0, st.s, {{std::max(d[1].lo, st.t - st.half_width), std::min(d[1].hi, st.t + st.half_width)}}, 1});
}

TMesh ts_step(const TMesh& m, const GrowthStep& st) {
  if (st.kind == GrowthStep::Kind::Local) return semi_standard_insert(m, m.point(st.s, st.t)).first;
  // New lines through every row of anchors, first in s, then in t.
  TMesh out = m;
  for (std::size_t k = 0; k < 2; ++k) {
    std::set<KnotKey> along, across;
    for (const auto& a : out.anchors()) {
      along.insert(a[k]);
      across.insert(a[1 - k]);
    }
    std::vector<double> vals;
    for (const auto& key : along) vals.push_back(key.value);
    std::vector<TPoint> qs;
    for (double v : midpoints(vals))
      for (const auto& c : across) {
        TPoint q;
        q[k] = KnotKey{v, 0};
        q[1 - k] = c;
        qs.push_back(q);
      }
    out = semi_standard_insert(out, qs).first;
  }
  return out;
}

}  // namespace

std::vector<GrowthRow> growth_compare(const GrowthBase& base, const std::vector<GrowthStep>& steps) {
  require(base.domain.dim() == 2 && base.cells.size() == 2 && base.degrees.size() == 2, ErrorCode::InvalidInput,
          "growth: bivariate start space required");
  std::vector<KnotVector> kv;
  for (std::size_t k = 0; k < 2; ++k)
    kv.push_back(KnotVector::clamped_uniform(base.domain[k].lo, base.domain[k].hi, base.cells[k], base.degrees[k]));

  std::optional<HierarchySelection> hb;
  std::optional<LRCollection> lr;
  std::optional<TMesh> ts;
  try {
    hb.emplace(base.domain, base.cells, base.degrees);
  } catch (const Error&) {
  }
  lr.emplace(from_tensor(kv));
  try {
    ts.emplace(TMesh::from_tensor(kv[0], kv[1]));
  } catch (const Error&) {
  }

  std::vector<GrowthRow> rows;
  auto record = [&] {
    GrowthRow r;
    if (hb) {
      r.hb = hb->active().size();
      r.thb = hb_to_collection(*hb, true).size();
    }
    if (lr) r.lr = lr->splines.size();
    if (ts) r.ts = ts->anchors().size();
    rows.push_back(r);
  };
  record();
  for (const auto& st : steps) {
    advance<HierarchySelection>(hb, [&](const HierarchySelection& s) { return hb_step(s, st); });
    advance<LRCollection>(lr, [&](const LRCollection& c) { return lr_step(c, st); });
    advance<TMesh>(ts, [&](const TMesh& m) { return ts_step(m, st); });
    record();
  }
  return rows;
}

std::string format_growth(const std::vector<GrowthRow>& rows) {
  std::string out = "step        HB       THB        LR        TS\n";
  auto cell = [](const std::optional<std::size_t>& v) {
    char buf[16];
    if (v) std::snprintf(buf, sizeof buf, "%10zu", *v);
    else std::snprintf(buf, sizeof buf, "%10s", "-");
    return std::string(buf);
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%4zu", i);
    out += buf + cell(rows[i].hb) + cell(rows[i].thb) + cell(rows[i].lr) + cell(rows[i].ts) + "\n";
  }
  return out;
}

}  // namespace lrkit

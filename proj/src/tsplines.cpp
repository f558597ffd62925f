#include "lrkit/tsplines.hpp"

#include <algorithm>

#include "lrkit/diagnostics.hpp"
#include "lrkit/error.hpp"

namespace lrkit {

namespace {

constexpr int kDegree = 3;

bool covers(const std::vector<std::pair<KnotKey, KnotKey>>& intervals, const KnotKey& x) {
  return std::any_of(intervals.begin(), intervals.end(), [&](const auto& r) { return r.first <= x && x <= r.second; });
}

std::vector<KnotKey> frame_keys(const KnotVector& kv) {
  const auto& v = kv.values();
  require(kv.degree() == kDegree, ErrorCode::InvalidInput, "tmesh: degree must be 3");
  require(v.size() >= 8, ErrorCode::InvalidInput, "tmesh: knot vector too short");
  const std::size_t n = v.size();
  for (std::size_t i = 1; i < 4; ++i)
    require(v[i] == v[0] && v[n - 1 - i] == v[n - 1], ErrorCode::InvalidInput, "tmesh: knot vector not clamped");
  for (std::size_t i = 4; i + 4 < n + 1; ++i)
    require(v[i - 1] < v[i], ErrorCode::InvalidInput, "tmesh: repeated interior knot");
  std::vector<KnotKey> keys;
  for (int i = 0; i < 4; ++i) keys.push_back({v.front(), i});
  for (std::size_t i = 4; i + 4 < n; ++i) keys.push_back({v[i], 0});
  for (int i = 0; i < 4; ++i) keys.push_back({v.back(), i});
  return keys;
}

LocalKnots values_of(const KeyKnots& k) {
  std::vector<double> v;
  for (const auto& key : k) v.push_back(key.value);
  return LocalKnots(std::move(v), kDegree);
}

}  // namespace

const char* to_string(TSplineClass c) {
  switch (c) {
    case TSplineClass::Standard: return "Standard";
    case TSplineClass::SemiStandard: return "SemiStandard";
    case TSplineClass::NonStandard: return "NonStandard";
  }
  return "?";
}

TensorBSpline InferredBSpline::bspline() const { return TensorBSpline({values_of(knots[0]), values_of(knots[1])}); }

TMesh TMesh::from_tensor(const KnotVector& s, const KnotVector& t, std::vector<double> coefficients,
                         std::size_t coef_dim) {
  TMesh m;
  const std::array<std::vector<KnotKey>, 2> keys{frame_keys(s), frame_keys(t)};
  m.domain_ = {s.domain(), t.domain()};
  for (std::size_t k = 0; k < 2; ++k)
    for (const auto& c : keys[k]) m.edges_[k][c] = {{keys[1 - k].front(), keys[1 - k].back()}};

  const int n0 = s.dimension(), n1 = t.dimension();
  const auto count = static_cast<std::size_t>(n0 * n1);
  if (coefficients.empty()) {
    coef_dim = 2;
    const auto g0 = greville_abscissae(s), g1 = greville_abscissae(t);
    for (int j = 0; j < n1; ++j)
      for (int i = 0; i < n0; ++i) {
        coefficients.push_back(g0[static_cast<std::size_t>(i)]);
        coefficients.push_back(g1[static_cast<std::size_t>(j)]);
      }
  }
  require(coef_dim >= 1 && coefficients.size() == count * coef_dim, ErrorCode::InvalidInput,
          "tmesh: coefficient count mismatch");
  m.coef_dim_ = coef_dim;
  for (int j = 0; j < n1; ++j)
    for (int i = 0; i < n0; ++i) {
      FunctionKey f;
      for (std::size_t r = 0; r < 5; ++r) {
        f[0][r] = keys[0][static_cast<std::size_t>(i) + r];
        f[1][r] = keys[1][static_cast<std::size_t>(j) + r];
      }
      const auto n = static_cast<std::size_t>(i + n0 * j);
      m.functions_[f] = {Rational(1), std::vector<double>(coefficients.begin() + static_cast<std::ptrdiff_t>(n * coef_dim),
                                                          coefficients.begin() + static_cast<std::ptrdiff_t>((n + 1) * coef_dim))};
      m.insert_vertex({f[0][2], f[1][2]});
    }
  return m;
}

KnotKey TMesh::key(std::size_t k, double value) const {
  require(domain_[k].lo < value && value < domain_[k].hi, ErrorCode::InvalidInput,
          "tmesh: parameter must be interior");
  return {value, 0};
}

bool TMesh::on_edge(const TPoint& p, std::size_t k) const {
  const auto it = edges_[k].find(p[k]);
  return it != edges_[k].end() && covers(it->second, p[1 - k]);
}

void TMesh::add_edge(std::size_t k, KnotKey line, KnotKey from, KnotKey to) {
  require(k < 2 && from < to, ErrorCode::InvalidInput, "tmesh: bad edge");
  auto& list = edges_[k][line];
  list.emplace_back(from, to);
  std::sort(list.begin(), list.end());
  std::vector<std::pair<KnotKey, KnotKey>> merged;
  for (const auto& r : list)
    if (!merged.empty() && r.first <= merged.back().second) merged.back().second = std::max(merged.back().second, r.second);
    else merged.push_back(r);
  list = std::move(merged);
}

void TMesh::add_anchor(const TPoint& p) {
  require(on_edge(p, 0) || on_edge(p, 1), ErrorCode::InvalidInput, "tmesh: vertex not on an edge");
  insert_vertex(p);
}

void TMesh::insert_vertex(const TPoint& p) {
  anchors_.insert(p);
  rows_[0][p[0]].insert(p[1]);
  rows_[1][p[1]].insert(p[0]);
}

std::array<KnotKey, 2> TMesh::hits(const TPoint& p, std::size_t k, int sign) const {
  // Lines met moving along direction k: edges of constant direction-k key
  // crossing the ray, and vertices on the ray.
  std::vector<KnotKey> found;
  const auto& lines = edges_[k];
  if (sign > 0) {
    for (auto it = lines.upper_bound(p[k]); it != lines.end() && found.size() < 2; ++it)
      if (covers(it->second, p[1 - k])) found.push_back(it->first);
  } else {
    for (auto it = std::make_reverse_iterator(lines.lower_bound(p[k])); it != lines.rend() && found.size() < 2; ++it)
      if (covers(it->second, p[1 - k])) found.push_back(it->first);
  }
  const auto row = rows_[1 - k].find(p[1 - k]);
  if (row != rows_[1 - k].end()) {
    const auto& vs = row->second;
    if (sign > 0) {
      auto it = vs.upper_bound(p[k]);
      for (int i = 0; i < 2 && it != vs.end(); ++i, ++it) found.push_back(*it);
    } else {
      auto it = std::make_reverse_iterator(vs.lower_bound(p[k]));
      for (int i = 0; i < 2 && it != vs.rend(); ++i, ++it) found.push_back(*it);
    }
  }
  std::sort(found.begin(), found.end());
  found.erase(std::unique(found.begin(), found.end()), found.end());
  if (sign < 0) std::reverse(found.begin(), found.end());
  require(found.size() >= 2, ErrorCode::MalformedMesh, "tmesh: traversal ran out of lines");
  return {found[0], found[1]};
}

void TMesh::connect(const TPoint& a, const TPoint& b) {
  for (std::size_t k = 0; k < 2; ++k)
    if (a[k] == b[k]) add_edge(k, a[k], std::min(a[1 - k], b[1 - k]), std::max(a[1 - k], b[1 - k]));
}

std::vector<InferredBSpline> TMesh::functions() const {
  std::vector<InferredBSpline> out;
  for (const auto& [f, e] : functions_) {
    InferredBSpline b{{f[0][2], f[1][2]}, f, e.gamma, e.gc};
    const double g = e.gamma.get_d();
    for (auto& v : b.coef) v /= g;
    out.push_back(std::move(b));
  }
  return out;
}

std::array<KeyKnots, 2> infer_knots(const TMesh& m, const TPoint& a) {
  require(m.is_anchor(a), ErrorCode::InvalidInput, "infer_knots: not an anchor");
  std::array<KeyKnots, 2> out;
  for (std::size_t k = 0; k < 2; ++k) {
    const auto lo = m.hits(a, k, -1), hi = m.hits(a, k, +1);
    out[k] = {lo[1], lo[0], a[k], hi[0], hi[1]};
  }
  return out;
}

bool standard_rule_check(const TMesh& m, const TPoint& q) {
  require(m.on_edge(q, 0) || m.on_edge(q, 1), ErrorCode::InvalidInput, "standard_rule_check: point not on an edge");
  for (std::size_t line = 0; line < 2; ++line) {
    if (!m.on_edge(q, line)) continue;
    // q sits on a line of constant direction-`line` key; the knot goes in
    // along the other direction.
    const std::size_t k = 1 - line;
    const KeyKnots* transverse = nullptr;
    for (const auto& f : m.functions()) {
      if (f.anchor[line] != q[line]) continue;
      const auto& kk = f.knots[k];
      if (!(kk.front() < q[k] && q[k] < kk.back())) continue;
      if (std::find(kk.begin(), kk.end(), q[k]) != kk.end()) continue;
      if (transverse == nullptr) transverse = &f.knots[line];
      else if (*transverse != f.knots[line]) return false;
    }
  }
  return true;
}

std::pair<TMesh, std::vector<InferredBSpline>> semi_standard_insert(const TMesh& m, const std::vector<TPoint>& qs) {
  TMesh out = m;
  for (const auto& q : qs) {
    // Interior values, or the frame copies that carry anchors.
    for (std::size_t k = 0; k < 2; ++k) {
      const auto& d = out.domain_[k];
      const KnotKey& c = q[k];
      const bool ok = (d.lo < c.value && c.value < d.hi && c.tie == 0) || (c.value == d.lo && (c.tie == 2 || c.tie == 3)) ||
                      (c.value == d.hi && (c.tie == 0 || c.tie == 1));
      require(ok, ErrorCode::InvalidInput, "semi_standard_insert: point outside the anchor range");
    }
    require(!out.is_anchor(q), ErrorCode::InvalidInput, "semi_standard_insert: point is already a vertex");
    require(out.on_edge(q, 0) || out.on_edge(q, 1), ErrorCode::InvalidInput, "semi_standard_insert: point not on an edge");
    out.insert_vertex(q);
  }
  // New collinear points that see each other are joined.
  for (std::size_t i = 0; i < qs.size(); ++i)
    for (std::size_t j = i + 1; j < qs.size(); ++j)
      for (std::size_t line = 0; line < 2; ++line) {
        if (qs[i][line] != qs[j][line]) continue;
        const std::size_t k = 1 - line;
        const KnotKey lo = std::min(qs[i][k], qs[j][k]), hi = std::max(qs[i][k], qs[j][k]);
        bool visible = true;
        for (auto it = out.edges_[k].upper_bound(lo); it != out.edges_[k].end() && it->first < hi; ++it)
          if (covers(it->second, qs[i][line])) visible = false;
        if (visible) out.connect(qs[i], qs[j]);
      }

  const std::size_t cap = 10 * out.anchors_.size();
  for (std::size_t sweep = 0;; ++sweep) {
    require(sweep < cap, ErrorCode::FixpointFailure, "semi_standard_insert: no fixpoint");
    bool changed = false;
    std::vector<TMesh::FunctionKey> keys;
    for (const auto& [f, e] : out.functions_) keys.push_back(f);
    for (const auto& f : keys) {
      const auto found = out.functions_.find(f);
      if (found == out.functions_.end()) continue;
      const TPoint c{f[0][2], f[1][2]};
      if (!out.is_anchor(c)) {
        // A refinement product centred at an edge crossing: that crossing
        // becomes a vertex.
        out.insert_vertex(c);
        changed = true;
      }
      const auto t = infer_knots(out, c);

      // A traversal knot inside the support that the B-spline lacks.
      bool split = false;
      for (std::size_t k = 0; k < 2 && !split; ++k)
        for (const auto& z : t[k]) {
          const auto& kk = f[k];
          if (!(kk.front() < z && z < kk.back()) || std::find(kk.begin(), kk.end(), z) != kk.end()) continue;
          std::array<KnotKey, 6> six;
          std::copy(kk.begin(), kk.end(), six.begin());
          six[5] = z;
          std::sort(six.begin(), six.end());
          const KnotSplit s = split_local(values_of(kk), z.value);
          const TMesh::Entry e = found->second;
          out.functions_.erase(found);
          for (int side = 0; side < 2; ++side) {
            TMesh::FunctionKey g = f;
            std::copy(six.begin() + side, six.begin() + side + 5, g[k].begin());
            const Rational& w = side == 0 ? s.first_weight : s.second_weight;
            if (w == 0) continue;
            auto& dst = out.functions_[g];
            if (dst.gc.empty()) dst.gc.assign(out.coef_dim_, 0.0);
            dst.gamma += e.gamma * w;
            for (std::size_t r = 0; r < e.gc.size(); ++r) dst.gc[r] += w.get_d() * e.gc[r];
          }
          split = true;
          break;
        }
      if (split) {
        changed = true;
        continue;
      }

      // A knot the mesh does not show: add a vertex there on the anchor's
      // line, joined to the anchor.
      if (t == f) continue;
      for (std::size_t k = 0; k < 2; ++k) {
        if (t[k] == f[k]) continue;
        KnotKey off = f[k][3] != t[k][3]   ? f[k][3]
                      : f[k][4] != t[k][4] ? f[k][4]
                      : f[k][1] != t[k][1] ? f[k][1]
                                           : f[k][0];
        TPoint v = c;
        v[k] = off;
        require(!out.is_anchor(v), ErrorCode::Inconsistency, "semi_standard_insert: hidden vertex");
        out.insert_vertex(v);
        out.connect(c, v);
        changed = true;
        break;
      }
    }
    if (!changed) break;
  }

  std::set<TPoint> centred;
  for (const auto& [f, e] : out.functions_) centred.insert({f[0][2], f[1][2]});
  for (const auto& a : out.anchors_)
    require(centred.count(a) > 0, ErrorCode::FixpointFailure, "semi_standard_insert: vertex without a B-spline");
  auto fs = out.functions();
  return {std::move(out), std::move(fs)};
}

std::pair<TMesh, std::vector<InferredBSpline>> semi_standard_insert(const TMesh& m, const TPoint& q) {
  return semi_standard_insert(m, std::vector<TPoint>{q});
}

TSplineCollection tmesh_to_collection(const TMesh& m) {
  std::map<TPoint, std::pair<Rational, std::vector<double>>> at;
  for (const auto& f : m.functions()) {
    auto& [g, gc] = at[f.anchor];
    if (gc.empty()) gc.assign(m.coef_dim(), 0.0);
    g += f.gamma;
    for (std::size_t r = 0; r < f.coef.size(); ++r) gc[r] += f.gamma.get_d() * f.coef[r];
  }
  TSplineCollection out;
  auto& c = out.collection;
  c.dim = 2;
  c.degrees = {kDegree, kDegree};
  c.coef_dim = m.coef_dim();
  c.independence = Independence::NotTested;
  bool unscaled = true;
  for (const auto& a : m.anchors()) {
    const auto k = infer_knots(m, a);
    ScaledBSpline s{TensorBSpline({values_of(k[0]), values_of(k[1])}), Rational(1), std::vector<double>(m.coef_dim(), 0.0)};
    const auto it = at.find(a);
    if (it != at.end() && it->second.first != 0) {
      s.gamma = it->second.first;
      const double g = s.gamma.get_d();
      for (std::size_t r = 0; r < s.coef.size(); ++r) s.coef[r] = it->second.second[r] / g;
    }
    unscaled = unscaled && s.gamma == 1;
    c.members.push_back(std::move(s));
  }
  const bool pou = partition_of_unity(c).exact;
  out.kind = !pou ? TSplineClass::NonStandard : unscaled ? TSplineClass::Standard : TSplineClass::SemiStandard;
  return out;
}

}  // namespace lrkit

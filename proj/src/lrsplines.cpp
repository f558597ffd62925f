#include "lrkit/lrsplines.hpp"

#include <deque>
#include <map>
#include <set>

#include "lrkit/diagnostics.hpp"
#include "lrkit/error.hpp"

namespace lrkit {

namespace {

/// Running sums for one B-spline: gamma, gamma*w and gamma*w*c.
struct Accumulator {
  Rational gamma;
  double gw = 0.0;
  std::vector<double> gwc;

  void add_scaled(const Accumulator& o, const Rational& alpha) {
    const double a = alpha.get_d();
    gamma += o.gamma * alpha;
    gw += o.gw * a;
    if (gwc.empty()) gwc.assign(o.gwc.size(), 0.0);
    for (std::size_t k = 0; k < gwc.size(); ++k) gwc[k] += o.gwc[k] * a;
  }
};

struct SplitResult {
  SplineCollection splines;
  RefineStats stats;
};

SplitResult split_to_minimal(const SplineCollection& in, const BoxPartition& mesh) {
  std::map<TensorBSpline, Accumulator> acc;
  std::deque<TensorBSpline> queue;
  for (const auto& m : in.members) {
    Accumulator a{m.gamma, m.gamma.get_d() * m.weight, {}};
    for (double c : m.coef) a.gwc.push_back(a.gw * c);
    acc.emplace(m.bspline, std::move(a));
    queue.push_back(m.bspline);
  }
  while (!queue.empty()) {
    TensorBSpline b = std::move(queue.front());
    queue.pop_front();
    auto it = acc.find(b);
    if (it == acc.end()) continue;
    const auto split = find_split(b, mesh);
    if (!split) continue;
    const Accumulator parent = std::move(it->second);
    acc.erase(it);
    const auto [dir, value] = *split;
    const KnotSplit ks = split_local(b.knots(dir), value);
    for (const auto& [child_knots, weight] : {std::pair{ks.first, ks.first_weight}, std::pair{ks.second, ks.second_weight}}) {
      if (weight == 0) continue;
      auto knots = b.all_knots();
      knots[dir] = child_knots;
      TensorBSpline child(std::move(knots));
      acc[child].add_scaled(parent, weight);
      queue.push_back(std::move(child));
    }
  }

  std::set<TensorBSpline> before;
  for (const auto& m : in.members) before.insert(m.bspline);
  SplitResult out;
  out.splines = in;
  out.splines.members.clear();
  for (auto& [b, a] : acc) {
    ScaledBSpline s{b, a.gamma, std::vector<double>(a.gwc.size(), 0.0), 1.0};
    for (std::size_t k = 0; k < a.gwc.size(); ++k) s.coef[k] = a.gwc[k] / a.gw;
    if (in.rational) s.weight = a.gw / a.gamma.get_d();
    if (!before.count(b)) ++out.stats.produced;
    out.splines.members.push_back(std::move(s));
  }
  for (const auto& b : before)
    if (!acc.count(b)) ++out.stats.split;
  return out;
}

LRCollection finish(const LRCollection& c, BoxPartition mesh, const RefineOptions& options) {
  SplitResult r = split_to_minimal(c.splines, mesh);
  LRCollection out{std::move(mesh), std::move(r.splines), r.stats};
  out.splines.independence =
      options.hand_in_hand ? linear_independence(out.splines).status : Independence::NotTested;
  return out;
}

}  // namespace

LRCollection from_tensor(const std::vector<KnotVector>& knots, std::vector<double> coefficients,
                         std::size_t coef_dim) {
  require(!knots.empty() && knots.size() <= 3, ErrorCode::InvalidInput,
          "from_tensor: dimension must be 1, 2 or 3");
  const std::size_t d = knots.size();
  std::size_t count = 1;
  std::vector<int> degrees;
  for (const auto& kv : knots) {
    count *= static_cast<std::size_t>(kv.dimension());
    degrees.push_back(kv.degree());
  }
  std::vector<std::vector<double>> greville;
  if (coefficients.empty()) {
    coef_dim = d;
    for (const auto& kv : knots) greville.push_back(greville_abscissae(kv));
  } else {
    require(coef_dim >= 1 && coefficients.size() == count * coef_dim, ErrorCode::InvalidInput,
            "from_tensor: coefficient count mismatch");
  }
  SplineCollection sc;
  sc.dim = d;
  sc.degrees = degrees;
  sc.coef_dim = coef_dim;
  sc.independence = Independence::Independent;
  std::vector<int> idx(d, 0);
  for (std::size_t n = 0; n < count; ++n) {
    std::vector<LocalKnots> local;
    for (std::size_t k = 0; k < d; ++k) local.push_back(knots[k].local(idx[k]));
    ScaledBSpline s{TensorBSpline(std::move(local)), Rational(1), {}, 1.0};
    if (coefficients.empty())
      for (std::size_t k = 0; k < d; ++k) s.coef.push_back(greville[k][static_cast<std::size_t>(idx[k])]);
    else
      s.coef.assign(coefficients.begin() + static_cast<std::ptrdiff_t>(n * coef_dim),
                    coefficients.begin() + static_cast<std::ptrdiff_t>((n + 1) * coef_dim));
    sc.members.push_back(std::move(s));
    for (std::size_t k = 0; k < d && ++idx[k] == knots[k].dimension(); ++k) idx[k] = 0;
  }
  std::sort(sc.members.begin(), sc.members.end(),
            [](const ScaledBSpline& a, const ScaledBSpline& b) { return a.bspline < b.bspline; });
  return {BoxPartition::from_tensor_space(knots), std::move(sc), {}};
}

std::optional<std::pair<std::size_t, double>> find_split(const TensorBSpline& b, const BoxPartition& mesh) {
  const Box support = support_box(b);
  for (std::size_t k = 0; k < b.dim(); ++k) {
    const LocalKnots& kk = b.knots(k);
    for (double v : mesh.values_between(k, kk.front(), kk.back()))
      if (mesh.covering_multiplicity(k, v, support) > kk.multiplicity(v)) return std::pair{k, v};
  }
  return std::nullopt;
}

bool minimal_support(const TensorBSpline& b, const BoxPartition& mesh) {
  return !find_split(b, mesh).has_value();
}

LRCollection refine(const LRCollection& c, const MeshRectangle& r, const RefineOptions& options) {
  BoxPartition mesh = c.mesh.insert(r);
  LRCollection out = finish(c, std::move(mesh), options);
  require(out.last.split > 0, ErrorCode::NoSplit, "refine: the meshrectangle splits no B-spline");
  return out;
}

LRCollection refine_all(const LRCollection& c, const std::vector<MeshRectangle>& rs,
                        const RefineOptions& options) {
  BoxPartition mesh = c.mesh;
  for (const auto& r : rs)
    if (!mesh.covers(r)) mesh.insert_in_place(r);
  return finish(c, std::move(mesh), options);
}

LRCollection structured_refine(const LRCollection& c, const std::vector<std::size_t>& selected,
                               const RefineOptions& options) {
  require(!selected.empty(), ErrorCode::InvalidInput, "structured_refine: nothing selected");
  const auto elements = c.mesh.elements();
  std::set<MeshRectangle> rects;
  for (std::size_t i : selected) {
    require(i < c.splines.members.size(), ErrorCode::InvalidInput, "structured_refine: index out of range");
    const Box support = support_box(c.splines.members[i].bspline);
    for (const auto& e : elements) {
      if (!support.contains(e)) continue;
      for (std::size_t k = 0; k < e.dim(); ++k)
        rects.insert({k, 0.5 * (e[k].lo + e[k].hi), MeshRectangle::transverse(e, k), 1});
    }
  }
  return refine_all(c, {rects.begin(), rects.end()}, options);
}

std::vector<double> anchor(const TensorBSpline& b) {
  std::vector<double> a;
  for (const auto& k : b.all_knots()) {
    const auto p = static_cast<std::size_t>(k.degree());
    if (p % 2 == 1)
      a.push_back(k[(p + 1) / 2]);
    else
      a.push_back(0.5 * (k[p / 2] + k[p / 2 + 1]));
  }
  return a;
}

}  // namespace lrkit

#include "lrkit/collection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "lrkit/error.hpp"

namespace lrkit {

const char* to_string(Independence status) {
  switch (status) {
    case Independence::Independent: return "Independent";
    case Independence::NotIndependent: return "NotIndependent";
    case Independence::NotTested: return "NotTested";
  }
  return "NotTested";
}

const char* to_string(SplineType type) {
  switch (type) {
    case SplineType::AnalysisSuitableTSpline: return "AnalysisSuitableTSpline";
    case SplineType::HierarchicalBSpline: return "HierarchicalBSpline";
    case SplineType::LRBSpline: return "LRBSpline";
    case SplineType::SemiStandardTSpline: return "SemiStandardTSpline";
    case SplineType::StandardTSpline: return "StandardTSpline";
  }
  return "LRBSpline";
}

Independence independence_from_string(const std::string& s) {
  for (auto v : {Independence::Independent, Independence::NotIndependent, Independence::NotTested})
    if (s == to_string(v)) return v;
  fail(ErrorCode::Parse, "unknown independence status '" + s + "'");
}

SplineType spline_type_from_string(const std::string& s) {
  for (auto v : {SplineType::AnalysisSuitableTSpline, SplineType::HierarchicalBSpline,
                 SplineType::LRBSpline, SplineType::SemiStandardTSpline,
                 SplineType::StandardTSpline})
    if (s == to_string(v)) return v;
  fail(ErrorCode::Parse, "unknown spline type '" + s + "'");
}

Box SplineCollection::domain() const {
  Box box;
  if (members.empty()) return box;
  box = support_box(members.front().bspline);
  for (const auto& m : members) {
    Box s = support_box(m.bspline);
    for (std::size_t k = 0; k < box.dim(); ++k) {
      box[k].lo = std::min(box[k].lo, s[k].lo);
      box[k].hi = std::max(box[k].hi, s[k].hi);
    }
  }
  return box;
}

void SplineCollection::validate() const {
  require(dim >= 1 && degrees.size() == dim, ErrorCode::Validation,
          "collection: degrees do not match dimension");
  require(coef_dim >= 1, ErrorCode::Validation, "collection: empty control values");
  for (std::size_t i = 0; i < members.size(); ++i) {
    const auto& m = members[i];
    const std::string where = "collection member " + std::to_string(i);
    require(m.bspline.dim() == dim, ErrorCode::Validation, where + ": dimension mismatch");
    require(m.bspline.degrees() == degrees, ErrorCode::Validation, where + ": degree mismatch");
    require(m.gamma > 0, ErrorCode::Validation, where + ": scaling factor must be positive");
    require(m.coef.size() == coef_dim, ErrorCode::Validation, where + ": control value size");
    require(m.weight > 0 && std::isfinite(m.weight), ErrorCode::Validation,
            where + ": weights must be positive");
    require(rational || m.weight == 1.0, ErrorCode::Validation,
            where + ": weight on a non-rational collection");
  }
}

CollectionBuilder::CollectionBuilder(std::size_t dim, std::vector<int> degrees,
                                     std::size_t coef_dim, bool rational)
    : dim_(dim), degrees_(std::move(degrees)), coef_dim_(coef_dim), rational_(rational) {}

void CollectionBuilder::add(const TensorBSpline& b, const Rational& gamma,
                            std::span<const double> coef, double weight) {
  require(coef.size() == coef_dim_, ErrorCode::InvalidInput, "builder: control value size");
  auto [it, inserted] = parts_.try_emplace(b);
  Part& part = it->second;
  if (inserted) part.gamma_weight_coef.assign(coef_dim_, 0.0);
  part.gamma += gamma;
  const double gw = gamma.get_d() * weight;
  part.gamma_weight += gw;
  for (std::size_t k = 0; k < coef_dim_; ++k) part.gamma_weight_coef[k] += gw * coef[k];
}

void CollectionBuilder::add(const ScaledBSpline& s, const Rational& factor) {
  add(s.bspline, s.gamma * factor, s.coef, s.weight);
}

SplineCollection CollectionBuilder::build(Independence status) const {
  SplineCollection c;
  c.dim = dim_;
  c.degrees = degrees_;
  c.coef_dim = coef_dim_;
  c.rational = rational_;
  c.independence = status;
  c.members.reserve(parts_.size());
  for (const auto& [b, part] : parts_) {
    if (part.gamma == 0) continue;
    ScaledBSpline s{b, part.gamma, std::vector<double>(coef_dim_, 0.0), 1.0};
    if (part.gamma_weight != 0.0)
      for (std::size_t k = 0; k < coef_dim_; ++k)
        s.coef[k] = part.gamma_weight_coef[k] / part.gamma_weight;
    if (rational_) s.weight = part.gamma_weight / part.gamma.get_d();
    c.members.push_back(std::move(s));
  }
  return c;
}

CollectionEvaluator::CollectionEvaluator(const SplineCollection& c) : c_(&c), domain_(c.domain()) {
  supports_.reserve(c.members.size());
  gamma_.reserve(c.members.size());
  for (const auto& m : c.members) {
    supports_.push_back(support_box(m.bspline));
    gamma_.push_back(m.gamma.get_d());
  }
}

std::vector<std::pair<std::size_t, double>> CollectionEvaluator::basis(
    std::span<const double> x) const {
  require(x.size() == c_->dim, ErrorCode::InvalidInput, "evaluation: dimension mismatch");
  std::vector<Side> sides(x.size(), Side::Right);
  for (std::size_t k = 0; k < x.size(); ++k)
    if (x[k] == domain_[k].hi) sides[k] = Side::Left;
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t i = 0; i < supports_.size(); ++i) {
    if (!supports_[i].contains(x)) continue;
    const double v = eval_tensor(c_->members[i].bspline, x, sides);
    if (v != 0.0) out.emplace_back(i, v);
  }
  return out;
}

double CollectionEvaluator::scaled_sum(std::span<const double> x) const {
  double sum = 0.0;
  for (auto [i, v] : basis(x)) sum += gamma_[i] * v;
  return sum;
}

std::vector<double> CollectionEvaluator::point(std::span<const double> x) const {
  std::vector<double> num(c_->coef_dim, 0.0);
  double den = 0.0;
  for (auto [i, v] : basis(x)) {
    const auto& m = c_->members[i];
    const double s = gamma_[i] * m.weight * v;
    den += s;
    for (std::size_t k = 0; k < num.size(); ++k) num[k] += s * m.coef[k];
  }
  if (c_->rational) {
    require(den != 0.0, ErrorCode::Inconsistency, "evaluation: zero denominator");
    for (auto& v : num) v /= den;
  }
  return num;
}

std::vector<std::vector<double>> sample_grid(const Box& box, int per_dir) {
  require(per_dir >= 1, ErrorCode::InvalidInput, "sample_grid: need at least one sample");
  // Offsets built from the golden ratio stay clear of dyadic knot values.
  constexpr double offset = 0.3819660112501051;
  std::vector<std::vector<double>> axes(box.dim());
  for (std::size_t k = 0; k < box.dim(); ++k)
    for (int i = 0; i < per_dir; ++i)
      axes[k].push_back(box[k].lo + box[k].length() * (i + offset) / per_dir);
  std::vector<std::vector<double>> points;
  std::vector<std::size_t> idx(box.dim(), 0);
  while (true) {
    std::vector<double> p(box.dim());
    for (std::size_t k = 0; k < box.dim(); ++k) p[k] = axes[k][idx[k]];
    points.push_back(std::move(p));
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == static_cast<std::size_t>(per_dir)) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return points;
}

int default_samples() {
  if (const char* env = std::getenv("LRKIT_SAMPLES")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 50;
}

}  // namespace lrkit

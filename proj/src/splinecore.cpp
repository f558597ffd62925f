#include "lrkit/splinecore.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>

namespace lrkit {

namespace {

void check_knots(const std::vector<double>& values, int degree, const char* what) {
  require(degree >= 0, ErrorCode::InvalidInput, std::string(what) + ": negative degree");
  for (double v : values)
    require(std::isfinite(v), ErrorCode::InvalidInput, std::string(what) + ": non-finite knot");
  for (std::size_t i = 1; i < values.size(); ++i)
    require(values[i - 1] <= values[i], ErrorCode::InvalidInput,
            std::string(what) + ": knots must be nondecreasing");
}

}  // namespace

KnotVector::KnotVector(std::vector<double> values, int degree)
    : values_(std::move(values)), degree_(degree) {
  check_knots(values_, degree_, "knot vector");
  require(static_cast<int>(values_.size()) >= degree_ + 2, ErrorCode::InvalidInput,
          "knot vector: dimension must be at least 1");
  const std::size_t span = static_cast<std::size_t>(degree_) + 1;
  for (std::size_t i = 0; i + span < values_.size(); ++i)
    require(values_[i] < values_[i + span], ErrorCode::InvalidInput,
            "knot vector: a knot value repeats more than p+1 times");
}

KnotVector KnotVector::clamped_uniform(double lo, double hi, int cells, int degree) {
  require(cells >= 1 && lo < hi, ErrorCode::InvalidInput, "clamped_uniform: bad range");
  std::vector<double> v(static_cast<std::size_t>(degree) + 1, lo);
  for (int i = 1; i < cells; ++i) v.push_back(lo + (hi - lo) * i / cells);
  v.insert(v.end(), static_cast<std::size_t>(degree) + 1, hi);
  return KnotVector(std::move(v), degree);
}

int KnotVector::multiplicity(double value) const {
  return static_cast<int>(std::count(values_.begin(), values_.end(), value));
}

std::vector<double> KnotVector::unique_values() const {
  std::vector<double> u = values_;
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

Interval KnotVector::domain() const {
  return {values_[static_cast<std::size_t>(degree_)],
          values_[static_cast<std::size_t>(dimension())]};
}

LocalKnots KnotVector::local(int i) const {
  require(i >= 0 && i < dimension(), ErrorCode::InvalidInput, "knot vector: index out of range");
  auto first = values_.begin() + i;
  return LocalKnots(std::vector<double>(first, first + degree_ + 2), degree_);
}

LocalKnots::LocalKnots(std::vector<double> values, int degree)
    : values_(std::move(values)), degree_(degree) {
  check_knots(values_, degree_, "local knots");
  require(values_.size() == static_cast<std::size_t>(degree_) + 2, ErrorCode::InvalidInput,
          "local knots: expected p+2 values");
  require(values_.front() < values_.back(), ErrorCode::InvalidInput,
          "local knots: degenerate support");
}

int LocalKnots::multiplicity(double value) const {
  return static_cast<int>(std::count(values_.begin(), values_.end(), value));
}

double eval_bspline(const LocalKnots& knots, double x, Side side) {
  if (x < knots.front() || x > knots.back()) return 0.0;
  return detail::eval_local<double>(knots.values(), knots.degree(), x, side);
}

Rational eval_bspline_exact(const LocalKnots& knots, const Rational& x, Side side) {
  return detail::eval_local<Rational>(knots.values(), knots.degree(), x, side);
}

double eval_bspline_derivative(const LocalKnots& knots, double x, int order, Side side) {
  require(order >= 0, ErrorCode::InvalidInput, "derivative order must be nonnegative");
  if (order == 0) return eval_bspline(knots, x, side);
  const int p = knots.degree();
  if (order > p) return 0.0;
  const auto& t = knots.values();
  double result = 0.0;
  const double left_den = t[static_cast<std::size_t>(p)] - t[0];
  if (left_den != 0.0) {
    LocalKnots left(std::vector<double>(t.begin(), t.end() - 1), p - 1);
    result += p / left_den * eval_bspline_derivative(left, x, order - 1, side);
  }
  const double right_den = t.back() - t[1];
  if (right_den != 0.0) {
    LocalKnots right(std::vector<double>(t.begin() + 1, t.end()), p - 1);
    result -= p / right_den * eval_bspline_derivative(right, x, order - 1, side);
  }
  return result;
}

int continuity_at(const KnotVector& kv, double value) {
  const int m = kv.multiplicity(value);
  require(m >= 1, ErrorCode::NotAKnot, "value " + std::to_string(value) + " is not a knot");
  return kv.degree() - m;
}

std::vector<double> RefinementMatrix::apply(std::span<const double> coarse) const {
  require(static_cast<int>(coarse.size()) == cols, ErrorCode::InvalidInput,
          "refinement matrix: coefficient count mismatch");
  std::vector<double> fine(static_cast<std::size_t>(rows), 0.0);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) fine[static_cast<std::size_t>(r)] += (*this)(r, c) * coarse[c];
  return fine;
}

KnotSplit split_local(const LocalKnots& knots, double z) {
  require(knots.front() < z && z < knots.back(), ErrorCode::InvalidInput,
          "split_local: knot must lie strictly inside the support");
  const int p = knots.degree();
  const auto& t = knots.values();
  std::vector<double> merged = t;
  merged.insert(std::upper_bound(merged.begin(), merged.end(), z), z);

  const Rational zq = exact(z);
  const auto P = static_cast<std::size_t>(p);
  Rational w1 = 1;
  if (z < t[P]) w1 = (zq - exact(t[0])) / (exact(t[P]) - exact(t[0]));
  Rational w2 = 1;
  if (z > t[1]) w2 = (exact(t[P + 1]) - zq) / (exact(t[P + 1]) - exact(t[1]));

  return KnotSplit{LocalKnots(std::vector<double>(merged.begin(), merged.end() - 1), p), w1,
                   LocalKnots(std::vector<double>(merged.begin() + 1, merged.end()), p), w2};
}

namespace {

/// Fine knot with higher multiplicity than in the piece, strictly inside its
/// support; nullopt when the piece is already a window of `fine`.
std::optional<double> missing_knot(const LocalKnots& piece, const KnotVector& fine) {
  const auto& f = fine.values();
  auto it = std::upper_bound(f.begin(), f.end(), piece.front());
  while (it != f.end() && *it < piece.back()) {
    const double v = *it;
    const auto run_end = std::upper_bound(it, f.end(), v);
    if (run_end - it > piece.multiplicity(v)) return v;
    it = run_end;
  }
  return std::nullopt;
}

int window_index(const LocalKnots& piece, const KnotVector& fine) {
  const auto& f = fine.values();
  const auto& k = piece.values();
  auto it = std::lower_bound(f.begin(), f.end(), k.front());
  for (; it != f.end() && *it == k.front(); ++it) {
    if (static_cast<std::size_t>(f.end() - it) < k.size()) break;
    if (std::equal(k.begin(), k.end(), it)) {
      const int idx = static_cast<int>(it - f.begin());
      if (idx < fine.dimension()) return idx;
    }
  }
  return -1;
}

}  // namespace

std::vector<std::pair<int, Rational>> expand_in(const LocalKnots& knots, const KnotVector& fine) {
  require(knots.degree() == fine.degree(), ErrorCode::InvalidInput,
          "expand_in: degree mismatch");
  std::map<LocalKnots, Rational> pending{{knots, Rational(1)}};
  std::map<int, Rational> result;
  while (!pending.empty()) {
    std::map<LocalKnots, Rational> next;
    for (auto& [piece, weight] : pending) {
      if (auto z = missing_knot(piece, fine)) {
        KnotSplit s = split_local(piece, *z);
        next[s.first] += weight * s.first_weight;
        next[s.second] += weight * s.second_weight;
        continue;
      }
      const int idx = window_index(piece, fine);
      require(idx >= 0, ErrorCode::NotNested,
              "local knots are not contained in the fine knot vector");
      result[idx] += weight;
    }
    pending = std::move(next);
  }
  return {result.begin(), result.end()};
}

ExactRefinementMatrix oslo_refine_exact(const KnotVector& coarse, const KnotVector& fine) {
  require(coarse.degree() == fine.degree(), ErrorCode::InvalidInput,
          "oslo_refine: degree mismatch");
  {
    // Sub-multiset check.
    const auto& c = coarse.values();
    const auto& f = fine.values();
    require(std::includes(f.begin(), f.end(), c.begin(), c.end()), ErrorCode::NotNested,
            "oslo_refine: coarse knots are not a sub-multiset of fine knots");
  }
  ExactRefinementMatrix m;
  m.rows = fine.dimension();
  m.cols = coarse.dimension();
  m.entries.assign(static_cast<std::size_t>(m.rows) * m.cols, Rational(0));
  for (int j = 0; j < m.cols; ++j)
    for (auto& [i, w] : expand_in(coarse.local(j), fine))
      m.entries[static_cast<std::size_t>(i) * m.cols + j] = w;
  return m;
}

RefinementMatrix oslo_refine(const KnotVector& coarse, const KnotVector& fine) {
  ExactRefinementMatrix e = oslo_refine_exact(coarse, fine);
  RefinementMatrix m{e.rows, e.cols, {}};
  m.entries.reserve(e.entries.size());
  for (const auto& q : e.entries) m.entries.push_back(q.get_d());
  return m;
}

std::vector<double> greville_abscissae(const KnotVector& kv) {
  const int p = kv.degree();
  const auto& t = kv.values();
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(kv.dimension()));
  for (int i = 0; i < kv.dimension(); ++i) {
    const auto I = static_cast<std::size_t>(i);
    if (p == 0) {
      g.push_back(0.5 * (t[I] + t[I + 1]));
      continue;
    }
    double sum = 0.0;
    for (int k = 1; k <= p; ++k) sum += t[I + static_cast<std::size_t>(k)];
    g.push_back(sum / p);
  }
  return g;
}

TensorBSpline::TensorBSpline(std::vector<LocalKnots> knots) : knots_(std::move(knots)) {
  require(!knots_.empty(), ErrorCode::InvalidInput, "tensor B-spline needs at least one direction");
}

std::vector<int> TensorBSpline::degrees() const {
  std::vector<int> p;
  for (const auto& k : knots_) p.push_back(k.degree());
  return p;
}

double eval_tensor(const TensorBSpline& b, std::span<const double> x) {
  require(x.size() == b.dim(), ErrorCode::InvalidInput, "eval_tensor: dimension mismatch");
  double v = 1.0;
  for (std::size_t k = 0; k < b.dim() && v != 0.0; ++k) v *= eval_bspline(b.knots(k), x[k]);
  return v;
}

double eval_tensor(const TensorBSpline& b, std::span<const double> x, std::span<const Side> sides) {
  require(x.size() == b.dim() && sides.size() == b.dim(), ErrorCode::InvalidInput,
          "eval_tensor: dimension mismatch");
  double v = 1.0;
  for (std::size_t k = 0; k < b.dim() && v != 0.0; ++k)
    v *= eval_bspline(b.knots(k), x[k], sides[k]);
  return v;
}

Box support_box(const TensorBSpline& b) {
  Box box;
  for (const auto& k : b.all_knots()) box.sides.push_back(k.support());
  return box;
}

std::int64_t tensor_space_growth(std::span<const std::int64_t> dims, std::size_t direction) {
  require(direction < dims.size(), ErrorCode::InvalidInput, "direction out of range");
  std::int64_t growth = 1;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (k != direction) growth *= dims[k];
  return growth;
}

}  // namespace lrkit

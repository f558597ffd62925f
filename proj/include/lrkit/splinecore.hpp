#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lrkit/box.hpp"
#include "lrkit/error.hpp"
#include "lrkit/rational.hpp"

namespace lrkit {

class LocalKnots;

/// Global knot vector of a univariate spline space of degree p.
class KnotVector {
public:
  KnotVector(std::vector<double> values, int degree);

  /// p+1 copies of each end value and `cells`-1 equidistant interior knots.
  static KnotVector clamped_uniform(double lo, double hi, int cells, int degree);

  const std::vector<double>& values() const { return values_; }
  int degree() const { return degree_; }
  int dimension() const { return static_cast<int>(values_.size()) - degree_ - 1; }
  int multiplicity(double value) const;
  std::vector<double> unique_values() const;
  /// [t_p, t_N] (0-based), the interval on which the basis is complete.
  Interval domain() const;
  /// Knots of the i-th basis function (0-based).
  LocalKnots local(int i) const;

  friend bool operator==(const KnotVector&, const KnotVector&) = default;

private:
  std::vector<double> values_;
  int degree_;
};

/// The p+2 knots of a single univariate B-spline.
class LocalKnots {
public:
  LocalKnots(std::vector<double> values, int degree);

  const std::vector<double>& values() const { return values_; }
  int degree() const { return degree_; }
  double front() const { return values_.front(); }
  double back() const { return values_.back(); }
  double operator[](std::size_t i) const { return values_[i]; }
  Interval support() const { return {front(), back()}; }
  int multiplicity(double value) const;

  friend bool operator==(const LocalKnots&, const LocalKnots&) = default;
  friend auto operator<=>(const LocalKnots&, const LocalKnots&) = default;

private:
  std::vector<double> values_;
  int degree_;
};

/// Which one-sided limit to take at a knot. `Right` is the half-open base
/// case 1 on [t_i, t_{i+1}); `Left` uses (t_i, t_{i+1}] and is used at the
/// right end of a domain.
enum class Side { Right, Left };

namespace detail {

template <class Scalar>
Scalar eval_local(const std::vector<double>& t, int p, const Scalar& x, Side side) {
  const std::size_t n = static_cast<std::size_t>(p) + 1;
  std::vector<Scalar> basis(n);
  for (std::size_t j = 0; j < n; ++j) {
    const bool inside = side == Side::Right ? (Scalar(t[j]) <= x && x < Scalar(t[j + 1]))
                                            : (Scalar(t[j]) < x && x <= Scalar(t[j + 1]));
    basis[j] = inside ? Scalar(1) : Scalar(0);
  }
  for (int k = 1; k <= p; ++k) {
    for (std::size_t j = 0; j + static_cast<std::size_t>(k) < n; ++j) {
      Scalar value(0);
      const double left_den = t[j + k] - t[j];
      if (left_den != 0.0 && basis[j] != Scalar(0))
        value += (x - Scalar(t[j])) / Scalar(left_den) * basis[j];
      const double right_den = t[j + k + 1] - t[j + 1];
      if (right_den != 0.0 && basis[j + 1] != Scalar(0))
        value += (Scalar(t[j + k + 1]) - x) / Scalar(right_den) * basis[j + 1];
      basis[j] = value;
    }
  }
  return basis[0];
}

}  // namespace detail

double eval_bspline(const LocalKnots& knots, double x, Side side = Side::Right);

/// Exact evaluation with rational arithmetic.
Rational eval_bspline_exact(const LocalKnots& knots, const Rational& x, Side side = Side::Right);

/// Derivative of the given order; zero for order > degree.
double eval_bspline_derivative(const LocalKnots& knots, double x, int order,
                               Side side = Side::Right);

/// p - m for a knot of multiplicity m; -1 means discontinuous.
int continuity_at(const KnotVector& kv, double value);

/// Dense matrix mapping coarse coefficients to fine coefficients.
struct RefinementMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> entries;  // row-major

  double operator()(int r, int c) const { return entries[static_cast<std::size_t>(r) * cols + c]; }
  std::vector<double> apply(std::span<const double> coarse) const;
};

/// Exact counterpart of RefinementMatrix.
struct ExactRefinementMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Rational> entries;  // row-major

  const Rational& operator()(int r, int c) const {
    return entries[static_cast<std::size_t>(r) * cols + c];
  }
};

/// Knot insertion weights from `coarse` to `fine` (single-knot insertion
/// composed until every coarse B-spline is a combination of fine ones).
RefinementMatrix oslo_refine(const KnotVector& coarse, const KnotVector& fine);
ExactRefinementMatrix oslo_refine_exact(const KnotVector& coarse, const KnotVector& fine);

/// Greville abscissae; for degree 0 the knot-interval midpoints.
std::vector<double> greville_abscissae(const KnotVector& kv);

/// Result of inserting one knot strictly inside a B-spline's support:
/// B = first_weight * B[first] + second_weight * B[second].
struct KnotSplit {
  LocalKnots first;
  Rational first_weight;
  LocalKnots second;
  Rational second_weight;
};

KnotSplit split_local(const LocalKnots& knots, double z);

/// Expresses a local B-spline in the basis of `fine` (exactly). Throws
/// NotNested when the local knots are not a sub-multiset window of `fine`.
std::vector<std::pair<int, Rational>> expand_in(const LocalKnots& knots, const KnotVector& fine);

class TensorBSpline {
public:
  explicit TensorBSpline(std::vector<LocalKnots> knots);

  std::size_t dim() const { return knots_.size(); }
  const LocalKnots& knots(std::size_t k) const { return knots_[k]; }
  const std::vector<LocalKnots>& all_knots() const { return knots_; }
  std::vector<int> degrees() const;

  friend bool operator==(const TensorBSpline&, const TensorBSpline&) = default;
  friend auto operator<=>(const TensorBSpline&, const TensorBSpline&) = default;

private:
  std::vector<LocalKnots> knots_;
};

double eval_tensor(const TensorBSpline& b, std::span<const double> x);

/// Per-direction side selection, e.g. Left where x_k hits the domain end.
double eval_tensor(const TensorBSpline& b, std::span<const double> x, std::span<const Side> sides);

Box support_box(const TensorBSpline& b);

/// Number of control points added to a full tensor space with the given
/// per-direction dimensions when one knot is inserted in `direction`
/// (0-based).
std::int64_t tensor_space_growth(std::span<const std::int64_t> dims, std::size_t direction);

}  // namespace lrkit

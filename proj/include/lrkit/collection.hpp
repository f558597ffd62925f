#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lrkit/box.hpp"
#include "lrkit/rational.hpp"
#include "lrkit/splinecore.hpp"

namespace lrkit {

enum class Independence { Independent, NotIndependent, NotTested };

enum class SplineType {
  AnalysisSuitableTSpline,
  HierarchicalBSpline,
  LRBSpline,
  SemiStandardTSpline,
  StandardTSpline,
};

const char* to_string(Independence status);
const char* to_string(SplineType type);
Independence independence_from_string(const std::string& s);
SplineType spline_type_from_string(const std::string& s);

/// A tensor B-spline with scaling factor and control value. The optional
/// rational weight defaults to 1.
struct ScaledBSpline {
  TensorBSpline bspline;
  Rational gamma{1};
  std::vector<double> coef;
  double weight = 1.0;
};

/// Set of scaled tensor B-splines sharing dimension and degrees. This is the
/// common output of the LR, hierarchical and T-spline engines.
struct SplineCollection {
  std::size_t dim = 0;
  std::vector<int> degrees;
  std::size_t coef_dim = 1;
  bool rational = false;
  std::vector<ScaledBSpline> members;
  Independence independence = Independence::NotTested;

  std::size_t size() const { return members.size(); }
  /// Bounding box of all supports.
  Box domain() const;
  /// Throws Validation on inconsistent degrees, dimensions or weights.
  void validate() const;
};

/// Merges contributions to identical B-splines: gamma adds, and the
/// control value becomes the gamma*weight-weighted average.
class CollectionBuilder {
public:
  CollectionBuilder(std::size_t dim, std::vector<int> degrees, std::size_t coef_dim, bool rational);

  void add(const TensorBSpline& b, const Rational& gamma, std::span<const double> coef,
           double weight = 1.0);
  void add(const ScaledBSpline& s, const Rational& factor = Rational(1));
  std::size_t size() const { return parts_.size(); }
  SplineCollection build(Independence status = Independence::NotTested) const;

private:
  struct Part {
    Rational gamma;
    double gamma_weight = 0.0;
    std::vector<double> gamma_weight_coef;
  };
  std::size_t dim_;
  std::vector<int> degrees_;
  std::size_t coef_dim_;
  bool rational_;
  std::map<TensorBSpline, Part> parts_;
};

/// Cached floating-point evaluation of a collection. Points on the upper
/// domain boundary are evaluated as left limits.
class CollectionEvaluator {
public:
  explicit CollectionEvaluator(const SplineCollection& c);

  const Box& domain() const { return domain_; }
  /// Unscaled B-spline values of the members that are nonzero at x.
  std::vector<std::pair<std::size_t, double>> basis(std::span<const double> x) const;
  /// Sum of gamma_i * B_i(x).
  double scaled_sum(std::span<const double> x) const;
  /// Rational/polynomial evaluation of the control values.
  std::vector<double> point(std::span<const double> x) const;

private:
  const SplineCollection* c_;
  Box domain_;
  std::vector<Box> supports_;
  std::vector<double> gamma_;
};

/// Interior sample grid with `per_dir` points per direction, offset so that
/// samples avoid dyadic knot lines.
std::vector<std::vector<double>> sample_grid(const Box& box, int per_dir);

/// Default samples per direction; LRKIT_SAMPLES overrides 50.
int default_samples();

}  // namespace lrkit

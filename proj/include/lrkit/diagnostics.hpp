#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "lrkit/box.hpp"
#include "lrkit/collection.hpp"
#include "lrkit/rational.hpp"
#include "lrkit/splinecore.hpp"

namespace lrkit {

/// A finite rational combination of tensor B-splines, e.g. a truncated
/// hierarchical function or a scaled collection member.
struct CompositeFunction {
  std::vector<std::pair<TensorBSpline, Rational>> terms;
};

std::vector<CompositeFunction> as_composites(const SplineCollection& c);

/// Tensor Bernstein coefficients of every member on every element it
/// overlaps. Index order inside a block: first direction fastest.
struct ElementBlock {
  Box box;
  std::vector<std::size_t> members;
  std::vector<std::vector<Rational>> coefficients;
};

struct ExtractionTable {
  std::vector<int> degrees;
  std::vector<ElementBlock> elements;
};

/// Exact extraction of gamma-free B-splines onto `partition`. Throws
/// Inconsistency when a member has a knot line inside an element it
/// overlaps.
ExtractionTable extract(const SplineCollection& c, const std::vector<Box>& partition);

/// Grid cells spanned by all member knot values inside the domain.
std::vector<Box> induced_partition(const SplineCollection& c);

/// Exact Bernstein coefficients of one univariate B-spline on [lo, hi],
/// which must not contain a knot in its interior.
std::vector<Rational> bernstein_coefficients(const LocalKnots& knots, double lo, double hi);

struct IndependenceReport {
  Independence status = Independence::NotTested;
  std::size_t count = 0;
  std::size_t rank = 0;
  /// When dependent: nu with sum nu_i * gamma_i * B_i == 0.
  std::vector<Rational> certificate;
};

IndependenceReport linear_independence(const SplineCollection& c);
IndependenceReport linear_independence(const std::vector<CompositeFunction>& functions);

struct PartitionOfUnityReport {
  double max_deviation = 0.0;  // sampled
  bool exact = false;          // Bernstein coefficients of the sum all 1
};

PartitionOfUnityReport partition_of_unity(const SplineCollection& c, int samples_per_dir);
PartitionOfUnityReport partition_of_unity(const SplineCollection& c);

struct NestednessReport {
  bool nested = false;
  /// Largest remaining Bernstein coefficient over failing members.
  double max_residual = 0.0;
  std::size_t failures = 0;
};

/// Is span(coarse) contained in span(fine)? Throws InvalidInput when the
/// domains differ.
NestednessReport nestedness(const SplineCollection& coarse, const SplineCollection& fine);
NestednessReport nestedness(const std::vector<CompositeFunction>& coarse,
                            const std::vector<CompositeFunction>& fine);

/// Per element: do the members overlapping it span all polynomials of the
/// collection's degrees there?
std::vector<bool> polynomial_reproduction(const SplineCollection& c, const std::vector<Box>& partition);

}  // namespace lrkit

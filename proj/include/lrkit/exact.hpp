#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "lrkit/rational.hpp"

namespace lrkit {

/// Sparse rational vector, sorted by index, no explicit zeros.
using SparseVector = std::vector<std::pair<std::size_t, Rational>>;

/// Row echelon form built one row at a time over the rationals. Optionally
/// tracks, for each stored row, which input rows it combines, so that a
/// dependent input yields an explicit null combination.
class IncrementalEchelon {
public:
  explicit IncrementalEchelon(bool track_combinations = false) : track_(track_combinations) {}

  /// Adds a row; returns false if it lies in the span of earlier rows.
  /// `label` names the row in dependency certificates.
  bool add(const SparseVector& row, std::size_t label = 0);

  std::size_t rank() const { return pivots_.size(); }

  /// Remainder of `row` after elimination; empty iff row is in the span.
  SparseVector reduce(const SparseVector& row) const;

  /// Coefficients (by label) of the first dependency found by add(); the
  /// combination of those input rows is zero. Empty if none was found.
  const SparseVector& dependency() const { return dependency_; }

private:
  struct Pivot {
    std::map<std::size_t, Rational> row;  // leading entry is 1
    std::map<std::size_t, Rational> combination;
  };

  bool track_;
  std::map<std::size_t, Pivot> pivots_;
  SparseVector dependency_;
};

/// Rank of a dense rational matrix given as rows.
std::size_t exact_rank(const std::vector<std::vector<Rational>>& rows);

SparseVector to_sparse(const std::vector<Rational>& dense);

}  // namespace lrkit

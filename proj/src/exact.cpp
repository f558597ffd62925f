#include "lrkit/exact.hpp"

namespace lrkit {

namespace {

using Work = std::map<std::size_t, Rational>;

// work -= factor * src
void axpy(Work& work, const Rational& factor, const Work& src) {
  for (const auto& [col, v] : src) {
    auto [it, inserted] = work.try_emplace(col);
    it->second -= factor * v;
    if (it->second == 0) work.erase(it);
  }
}

}  // namespace

bool IncrementalEchelon::add(const SparseVector& row, std::size_t label) {
  Work work(row.begin(), row.end());
  Work comb;
  if (track_) comb[label] = 1;
  for (auto it = work.begin(); it != work.end();) {
    auto p = pivots_.find(it->first);
    if (p == pivots_.end()) {
      ++it;
      continue;
    }
    const std::size_t col = it->first;
    const Rational factor = it->second;
    axpy(work, factor, p->second.row);
    if (track_) axpy(comb, factor, p->second.combination);
    it = work.upper_bound(col);
  }
  if (work.empty()) {
    if (track_ && dependency_.empty()) dependency_.assign(comb.begin(), comb.end());
    return false;
  }
  // The leading column of the remainder has no pivot yet.
  const std::size_t lead = work.begin()->first;
  const Rational inv = 1 / work.begin()->second;
  for (auto& [col, v] : work) v *= inv;
  if (track_)
    for (auto& [col, v] : comb) v *= inv;
  pivots_.emplace(lead, Pivot{std::move(work), std::move(comb)});
  return true;
}

SparseVector IncrementalEchelon::reduce(const SparseVector& row) const {
  Work work(row.begin(), row.end());
  for (auto it = work.begin(); it != work.end();) {
    auto p = pivots_.find(it->first);
    if (p == pivots_.end()) {
      ++it;
      continue;
    }
    const std::size_t col = it->first;
    axpy(work, Rational(it->second), p->second.row);
    it = work.upper_bound(col);
  }
  return {work.begin(), work.end()};
}

SparseVector to_sparse(const std::vector<Rational>& dense) {
  SparseVector s;
  for (std::size_t i = 0; i < dense.size(); ++i)
    if (dense[i] != 0) s.emplace_back(i, dense[i]);
  return s;
}

std::size_t exact_rank(const std::vector<std::vector<Rational>>& rows) {
  IncrementalEchelon e;
  for (const auto& r : rows) e.add(to_sparse(r));
  return e.rank();
}

}  // namespace lrkit

#include "lrkit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "lrkit/error.hpp"
#include "lrkit/exact.hpp"

namespace lrkit {

namespace {

Rational binomial(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

/// Inverse of the Bernstein collocation matrix at u_i = (i+1)/(p+2).
const std::vector<std::vector<Rational>>& collocation_inverse(int p) {
  static std::mutex mutex;
  static std::map<int, std::vector<std::vector<Rational>>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  const int n = p + 1;
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
  for (int i = 0; i < n; ++i) {
    const Rational u(i + 1, p + 2);
    const Rational v = 1 - u;
    for (int j = 0; j < n; ++j) {
      Rational term = binomial(p, j);
      for (int e = 0; e < j; ++e) term *= u;
      for (int e = 0; e < p - j; ++e) term *= v;
      a[i][j] = term;
    }
    a[i][n + i] = 1;
  }
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (a[piv][c] == 0) ++piv;
    std::swap(a[piv], a[c]);
    const Rational inv = 1 / a[c][c];
    for (auto& x : a[c]) x *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c];
      for (int k = 0; k < 2 * n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
  return cache.emplace(p, std::move(inv)).first->second;
}

std::vector<Rational> tensor_product(const std::vector<std::vector<Rational>>& factors) {
  std::vector<Rational> out{Rational(1)};
  for (const auto& f : factors) {
    std::vector<Rational> next;
    next.reserve(out.size() * f.size());
    for (const auto& b : f)
      for (const auto& a : out) next.push_back(a * b);
    out = std::move(next);
  }
  return out;
}

/// Fine grid over all knot lines of a set of functions, with cached exact
/// univariate extraction per (knots, cell).
class Extractor {
public:
  Extractor(std::size_t dim, std::vector<int> degrees) : dim_(dim), degrees_(std::move(degrees)), lines_(dim) {}

  void add_lines(const CompositeFunction& f) {
    for (const auto& [b, w] : f.terms)
      for (std::size_t k = 0; k < dim_; ++k)
        for (double v : b.knots(k).values()) lines_[k].push_back(v);
  }

  void finalize() {
    block_ = 1;
    for (std::size_t k = 0; k < dim_; ++k) {
      auto& g = lines_[k];
      std::sort(g.begin(), g.end());
      g.erase(std::unique(g.begin(), g.end()), g.end());
      require(g.size() >= 2, ErrorCode::InvalidInput, "extraction: empty domain");
      cells_.push_back(g.size() - 1);
      block_ *= static_cast<std::size_t>(degrees_[k]) + 1;
    }
  }

  std::size_t block() const { return block_; }
  std::size_t cell_count() const {
    std::size_t n = 1;
    for (auto c : cells_) n *= c;
    return n;
  }
  const std::vector<std::vector<double>>& lines() const { return lines_; }

  SparseVector row(const CompositeFunction& f) {
    std::map<std::size_t, Rational> acc;
    for (const auto& [b, w] : f.terms) {
      std::vector<std::size_t> lo(dim_), hi(dim_);
      for (std::size_t k = 0; k < dim_; ++k) {
        const auto& g = lines_[k];
        lo[k] = index_of(g, b.knots(k).front());
        hi[k] = index_of(g, b.knots(k).back());
      }
      std::vector<std::size_t> idx = lo;
      while (true) {
        std::vector<std::vector<Rational>> factors;
        std::size_t cell = 0, stride = 1;
        bool zero = false;
        for (std::size_t k = 0; k < dim_; ++k) {
          const auto& u = univariate(b.knots(k), idx[k], k);
          if (u.empty()) zero = true;
          factors.push_back(u);
          cell += idx[k] * stride;
          stride *= cells_[k];
        }
        if (!zero) {
          const auto coefs = tensor_product(factors);
          for (std::size_t j = 0; j < coefs.size(); ++j)
            if (coefs[j] != 0) acc[cell * block_ + j] += w * coefs[j];
        }
        std::size_t k = 0;
        while (k < dim_ && ++idx[k] == hi[k]) idx[k] = lo[k], ++k;
        if (k == dim_) break;
      }
    }
    SparseVector out;
    for (auto& [c, v] : acc)
      if (v != 0) out.emplace_back(c, std::move(v));
    return out;
  }

private:
  static std::size_t index_of(const std::vector<double>& g, double v) {
    auto it = std::lower_bound(g.begin(), g.end(), v);
    require(it != g.end() && *it == v, ErrorCode::Inconsistency, "extraction: knot off the grid");
    return static_cast<std::size_t>(it - g.begin());
  }

  // Empty result means the B-spline vanishes on the cell.
  const std::vector<Rational>& univariate(const LocalKnots& knots, std::size_t cell, std::size_t k) {
    auto key = std::make_pair(knots, cell);
    auto it = cache_[k].find(key);
    if (it != cache_[k].end()) return it->second;
    std::vector<Rational> c = bernstein_coefficients(knots, lines_[k][cell], lines_[k][cell + 1]);
    if (std::all_of(c.begin(), c.end(), [](const Rational& x) { return x == 0; })) c.clear();
    return cache_[k].emplace(std::move(key), std::move(c)).first->second;
  }

  std::size_t dim_;
  std::vector<int> degrees_;
  std::vector<std::vector<double>> lines_;
  std::vector<std::size_t> cells_;
  std::size_t block_ = 1;
  std::map<std::pair<LocalKnots, std::size_t>, std::vector<Rational>> cache_[3];
};

std::vector<int> degrees_of(const std::vector<CompositeFunction>& fs) {
  for (const auto& f : fs)
    if (!f.terms.empty()) return f.terms.front().first.degrees();
  fail(ErrorCode::InvalidInput, "diagnostics: no functions");
}

Extractor make_extractor(std::initializer_list<const std::vector<CompositeFunction>*> sets) {
  std::vector<int> degrees;
  for (const auto* s : sets)
    if (degrees.empty() && !s->empty()) degrees = degrees_of(*s);
  require(!degrees.empty(), ErrorCode::InvalidInput, "diagnostics: no functions");
  require(degrees.size() <= 3, ErrorCode::InvalidInput, "diagnostics: dimension above 3");
  Extractor ex(degrees.size(), degrees);
  for (const auto* s : sets)
    for (const auto& f : *s) {
      for (const auto& [b, w] : f.terms)
        require(b.degrees() == degrees, ErrorCode::InvalidInput, "diagnostics: degree mismatch");
      ex.add_lines(f);
    }
  ex.finalize();
  return ex;
}

Box bounding_box(const std::vector<CompositeFunction>& fs) {
  Box box;
  for (const auto& f : fs)
    for (const auto& [b, w] : f.terms) {
      Box s = support_box(b);
      if (box.dim() == 0) {
        box = s;
        continue;
      }
      for (std::size_t k = 0; k < box.dim(); ++k) {
        box[k].lo = std::min(box[k].lo, s[k].lo);
        box[k].hi = std::max(box[k].hi, s[k].hi);
      }
    }
  return box;
}

}  // namespace

std::vector<CompositeFunction> as_composites(const SplineCollection& c) {
  std::vector<CompositeFunction> out;
  out.reserve(c.members.size());
  for (const auto& m : c.members) out.push_back({{{m.bspline, m.gamma}}});
  return out;
}

std::vector<Rational> bernstein_coefficients(const LocalKnots& knots, double lo, double hi) {
  require(lo < hi, ErrorCode::InvalidInput, "bernstein_coefficients: empty interval");
  const int p = knots.degree();
  for (double t : knots.values())
    require(!(lo < t && t < hi), ErrorCode::Inconsistency,
            "bernstein_coefficients: knot inside the element");
  std::vector<Rational> out(static_cast<std::size_t>(p) + 1);
  if (hi <= knots.front() || lo >= knots.back()) return out;
  const Rational a = exact(lo), len = exact(hi) - a;
  std::vector<Rational> values;
  for (int i = 0; i <= p; ++i) values.push_back(eval_bspline_exact(knots, a + Rational(i + 1, p + 2) * len));
  const auto& inv = collocation_inverse(p);
  for (int j = 0; j <= p; ++j)
    for (int i = 0; i <= p; ++i) out[static_cast<std::size_t>(j)] += inv[j][i] * values[static_cast<std::size_t>(i)];
  return out;
}

ExtractionTable extract(const SplineCollection& c, const std::vector<Box>& partition) {
  ExtractionTable table{c.degrees, {}};
  std::vector<Box> supports;
  for (const auto& m : c.members) supports.push_back(support_box(m.bspline));
  for (const auto& element : partition) {
    ElementBlock block{element, {}, {}};
    for (std::size_t i = 0; i < c.members.size(); ++i) {
      if (!supports[i].overlaps(element)) continue;
      std::vector<std::vector<Rational>> factors;
      for (std::size_t k = 0; k < c.dim; ++k)
        factors.push_back(bernstein_coefficients(c.members[i].bspline.knots(k), element[k].lo, element[k].hi));
      block.members.push_back(i);
      block.coefficients.push_back(tensor_product(factors));
    }
    table.elements.push_back(std::move(block));
  }
  return table;
}

std::vector<Box> induced_partition(const SplineCollection& c) {
  auto fs = as_composites(c);
  Extractor ex = make_extractor({&fs});
  const auto& g = ex.lines();
  std::vector<Box> out;
  std::vector<std::size_t> idx(g.size(), 0);
  while (true) {
    Box b;
    for (std::size_t k = 0; k < g.size(); ++k) b.sides.push_back({g[k][idx[k]], g[k][idx[k] + 1]});
    out.push_back(std::move(b));
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] + 1 == g[k].size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

IndependenceReport linear_independence(const std::vector<CompositeFunction>& functions) {
  IndependenceReport report;
  report.count = functions.size();
  if (functions.empty()) {
    report.status = Independence::Independent;
    return report;
  }
  Extractor ex = make_extractor({&functions});
  std::vector<SparseVector> rows;
  rows.reserve(functions.size());
  for (const auto& f : functions) rows.push_back(ex.row(f));
  IncrementalEchelon echelon;
  for (const auto& r : rows) echelon.add(r);
  report.rank = echelon.rank();
  if (report.rank == report.count) {
    report.status = Independence::Independent;
    return report;
  }
  report.status = Independence::NotIndependent;
  // Second pass with row bookkeeping for the certificate.
  IncrementalEchelon tracked(true);
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (!tracked.add(rows[i], i)) break;
  report.certificate.assign(functions.size(), Rational(0));
  for (const auto& [i, v] : tracked.dependency()) report.certificate[i] = v;
  return report;
}

IndependenceReport linear_independence(const SplineCollection& c) {
  return linear_independence(as_composites(c));
}

PartitionOfUnityReport partition_of_unity(const SplineCollection& c, int samples_per_dir) {
  PartitionOfUnityReport report;
  if (c.members.empty()) {
    report.max_deviation = 1.0;
    return report;
  }
  CollectionEvaluator ev(c);
  for (const auto& x : sample_grid(ev.domain(), samples_per_dir))
    report.max_deviation = std::max(report.max_deviation, std::abs(ev.scaled_sum(x) - 1.0));

  auto fs = as_composites(c);
  Extractor ex = make_extractor({&fs});
  CompositeFunction sum;
  for (const auto& f : fs) sum.terms.push_back(f.terms.front());
  const SparseVector total = ex.row(sum);
  const std::size_t expected = ex.cell_count() * ex.block();
  report.exact = total.size() == expected &&
                 std::all_of(total.begin(), total.end(), [](const auto& e) { return e.second == 1; });
  return report;
}

PartitionOfUnityReport partition_of_unity(const SplineCollection& c) {
  return partition_of_unity(c, default_samples());
}

NestednessReport nestedness(const std::vector<CompositeFunction>& coarse,
                            const std::vector<CompositeFunction>& fine) {
  require(bounding_box(coarse) == bounding_box(fine), ErrorCode::InvalidInput,
          "nestedness: collections live on different domains");
  Extractor ex = make_extractor({&coarse, &fine});
  IncrementalEchelon echelon;
  for (const auto& f : fine) echelon.add(ex.row(f));
  NestednessReport report;
  for (const auto& f : coarse) {
    const SparseVector rest = echelon.reduce(ex.row(f));
    if (rest.empty()) continue;
    ++report.failures;
    for (const auto& [col, v] : rest) report.max_residual = std::max(report.max_residual, std::abs(v.get_d()));
  }
  report.nested = report.failures == 0;
  return report;
}

NestednessReport nestedness(const SplineCollection& coarse, const SplineCollection& fine) {
  return nestedness(as_composites(coarse), as_composites(fine));
}

std::vector<bool> polynomial_reproduction(const SplineCollection& c, const std::vector<Box>& partition) {
  const ExtractionTable table = extract(c, partition);
  std::size_t full = 1;
  for (int p : c.degrees) full *= static_cast<std::size_t>(p) + 1;
  std::vector<bool> out;
  out.reserve(table.elements.size());
  for (const auto& e : table.elements) out.push_back(exact_rank(e.coefficients) == full);
  return out;
}

}  // namespace lrkit

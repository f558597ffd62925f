#pragma once

// Independent reference implementations used only by the test suites. None
// of these call into the library's evaluation code.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "lrkit/splinecore.hpp"

namespace oracle {

/// Textbook recursion over a global knot vector, half-open base case.
inline double bspline(const std::vector<double>& t, std::size_t i, int p, double x) {
  if (p == 0) return (t[i] <= x && x < t[i + 1]) ? 1.0 : 0.0;
  double v = 0.0;
  const double d1 = t[i + p] - t[i];
  if (d1 > 0) v += (x - t[i]) / d1 * bspline(t, i, p - 1, x);
  const double d2 = t[i + p + 1] - t[i + 1];
  if (d2 > 0) v += (t[i + p + 1] - x) / d2 * bspline(t, i + 1, p - 1, x);
  return v;
}

/// Closed-form cubic on the integer knots 0..4.
inline double cardinal_cubic(double x) {
  if (x < 0 || x >= 4) return 0.0;
  if (x < 1) return x * x * x / 6;
  if (x < 2) return (-3 * x * x * x + 12 * x * x - 12 * x + 4) / 6;
  if (x < 3) return (3 * x * x * x - 24 * x * x + 60 * x - 44) / 6;
  const double y = 4 - x;
  return y * y * y / 6;
}

template <class Rng>
std::vector<double> random_local_knots(Rng& rng, int p) {
  std::uniform_int_distribution<int> pick(0, 6);
  std::vector<double> t;
  do {
    t.clear();
    for (int i = 0; i < p + 2; ++i) t.push_back(pick(rng) * 0.5);
    std::sort(t.begin(), t.end());
  } while (t.front() == t.back());
  return t;
}

/// Clamped knot vector on [0, cells] with random interior values and
/// multiplicities up to p.
template <class Rng>
lrkit::KnotVector random_clamped(Rng& rng, int p, int cells) {
  std::vector<double> t(static_cast<std::size_t>(p) + 1, 0.0);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  std::uniform_int_distribution<int> mult(1, std::max(1, p));
  for (int i = 1; i < cells; ++i) {
    const double v = i + jitter(rng);
    const int m = mult(rng);
    for (int k = 0; k < m; ++k) t.push_back(v);
  }
  t.insert(t.end(), static_cast<std::size_t>(p) + 1, static_cast<double>(cells));
  return lrkit::KnotVector(t, p);
}

/// de Boor's algorithm; left limit at the right end of the domain.
inline double curve(const lrkit::KnotVector& kv, const std::vector<double>& c, double x) {
  const auto& t = kv.values();
  const int p = kv.degree();
  const int n = kv.dimension();
  int k = p;
  while (k + 1 < n && t[static_cast<std::size_t>(k) + 1] <= x) ++k;
  std::vector<double> d(static_cast<std::size_t>(p) + 1);
  for (int j = 0; j <= p; ++j) d[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j + k - p)];
  for (int r = 1; r <= p; ++r)
    for (int j = p; j >= r; --j) {
      const std::size_t a = static_cast<std::size_t>(j + k - p), b = static_cast<std::size_t>(j + 1 + k - r);
      const double alpha = (x - t[a]) / (t[b] - t[a]);
      d[static_cast<std::size_t>(j)] = (1 - alpha) * d[static_cast<std::size_t>(j) - 1] + alpha * d[static_cast<std::size_t>(j)];
    }
  return d[static_cast<std::size_t>(p)];
}

/// Continuity order at `knot` estimated from one-sided polynomial fits to
/// sampled values: the largest k such that derivatives 0..k agree.
inline int fd_continuity_order(const lrkit::KnotVector& kv, const std::vector<double>& c, double knot) {
  const int p = kv.degree();
  auto fit = [&](double sign) {
    // Polynomial in s = sign*(x - knot) through p+1 samples on one side.
    const int n = p + 1;
    Eigen::MatrixXd V(n, n);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      const double s = 0.1 + 0.8 * i / std::max(1, n - 1);
      for (int j = 0; j < n; ++j) V(i, j) = std::pow(s, j);
      y(i) = curve(kv, c, knot + sign * s);
    }
    Eigen::VectorXd a = V.fullPivLu().solve(y);
    std::vector<double> deriv(static_cast<std::size_t>(n));
    double fact = 1;
    for (int j = 0; j < n; ++j) {
      if (j > 0) fact *= j;
      deriv[static_cast<std::size_t>(j)] = a(j) * fact * std::pow(sign, j);
    }
    return deriv;
  };
  auto left = fit(-1.0), right = fit(1.0);
  int order = -1;
  for (int k = 0; k <= p; ++k) {
    const double scale = std::max({1.0, std::abs(left[static_cast<std::size_t>(k)]), std::abs(right[static_cast<std::size_t>(k)])});
    if (std::abs(left[static_cast<std::size_t>(k)] - right[static_cast<std::size_t>(k)]) > 1e-6 * scale) break;
    order = k;
  }
  return order;
}

}  // namespace oracle

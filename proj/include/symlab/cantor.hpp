#pragma once

// The classical middle-thirds Cantor function and exact integration of
// polynomials against the Cantor measure, via self-similarity:
//   mu = (S0 # mu + S2 # mu) / 2,   S0(x) = x/3,  S2(x) = (x+2)/3.

#include "symlab/multi_index.hpp"
#include "symlab/piecewise_poly.hpp"

#include <cmath>
#include <cstdint>
#include <mutex>
#include <vector>

namespace symlab {

// Devil's staircase on [0,1], clamped outside.  Ternary digits are consumed
// until the first 1; 60 digits exhaust double precision.
inline double cantor_function(double x) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  double value = 0, scale = 0.5;
  for (int i = 0; i < 60 && x > 0; ++i) {
    x *= 3;
    int digit = static_cast<int>(x);
    if (digit > 2) digit = 2;
    x -= digit;
    if (digit == 1) {
      value += scale;
      break;
    }
    if (digit == 2) value += scale;
    scale *= 0.5;
  }
  return value;
}

// mu_C([a,b]) for the standard Cantor measure; the measure is non-atomic, so
// open versus closed endpoints make no difference.
inline double cantor_measure_interval(double a, double b) {
  if (b <= a) return 0;
  return cantor_function(b) - cantor_function(a);
}

// Moments m_k = integral of x^k d mu_C over [0,1].  Self-similarity gives
//   m_k (1 - 3^-k) = 3^-k / 2 * sum_{j<k} C(k,j) 2^(k-j) m_j,   m_0 = 1.
inline double cantor_moment(int k) {
  static std::vector<double> cache{1.0};
  static std::mutex guard;
  std::lock_guard<std::mutex> lock(guard);
  while (static_cast<int>(cache.size()) <= k) {
    const int m = static_cast<int>(cache.size());
    const double p = std::pow(3.0, -m);
    double sum = 0;
    for (int j = 0; j < m; ++j)
      sum += static_cast<double>(binomial(m, j)) * std::pow(2.0, m - j) * cache[static_cast<std::size_t>(j)];
    cache.push_back(0.5 * p / (1.0 - p) * sum);
  }
  return cache[static_cast<std::size_t>(k)];
}

namespace detail {

inline double cantor_poly_integral_rec(const Poly& q, double a, double b, int depth) {
  a = std::max(a, 0.0);
  b = std::min(b, 1.0);
  if (b <= a) return 0;
  if (a == 0.0 && b == 1.0) {
    double total = 0;
    for (std::size_t k = 0; k < q.c.size(); ++k)
      if (q.c[k] != 0.0) total += q.c[k] * cantor_moment(static_cast<int>(k));
    return total;
  }
  if (depth > 64 || b - a < 1e-18)
    return q.eval(0.5 * (a + b)) * cantor_measure_interval(a, b);

  double total = 0;
  // left cell: x = s/3 carries mass 1/2 of a fresh copy
  if (a < 1.0 / 3.0)
    total += 0.5 * cantor_poly_integral_rec(poly_affine(q, 1.0 / 3.0, 0.0), 3.0 * a,
                                            3.0 * std::min(b, 1.0 / 3.0), depth + 1);
  // right cell: x = (s+2)/3
  if (b > 2.0 / 3.0)
    total += 0.5 * cantor_poly_integral_rec(poly_affine(q, 1.0 / 3.0, 2.0 / 3.0),
                                            3.0 * std::max(a, 2.0 / 3.0) - 2.0, 3.0 * b - 2.0,
                                            depth + 1);
  return total;
}

}  // namespace detail

// integral of q over [a,b] against the standard Cantor measure on [0,1].
// Interior cells that are fully covered resolve through the global moments,
// so only the two cells containing the endpoints recurse.
inline double cantor_poly_integral(const Poly& q, double a, double b) {
  return detail::cantor_poly_integral_rec(q, a, b, 0);
}

// integral of q over [a,b] against the Cantor measure transported onto
// [lo, hi] (unit total mass).
inline double cantor_poly_integral_scaled(const Poly& q, double lo, double hi, double a,
                                          double b) {
  const double len = hi - lo;
  if (len <= 0) return 0;
  return cantor_poly_integral(poly_affine(q, len, lo), (a - lo) / len, (b - lo) / len);
}

}  // namespace symlab

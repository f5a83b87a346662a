#pragma once

// Exact univariate polynomial and piecewise-polynomial calculus.  Everything
// downstream (box cross-sections, profile densities, total variation) reduces
// to closed-form integration here; no quadrature happens in this header.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace symlab {

// Coefficients by ascending power; the zero polynomial is {0}.
struct Poly {
  std::vector<double> c{0.0};

  Poly() = default;
  explicit Poly(std::vector<double> coeffs) : c(std::move(coeffs)) {
    if (c.empty()) c.push_back(0.0);
    trim();
  }
  static Poly constant(double v) { return Poly({v}); }

  void trim() {
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const {
    for (double v : c)
      if (v != 0.0) return false;
    return true;
  }
  double eval(double x) const {
    double acc = 0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
  }
};

inline Poly poly_add(const Poly& p, const Poly& q) {
  std::vector<double> r(std::max(p.c.size(), q.c.size()), 0.0);
  for (std::size_t i = 0; i < p.c.size(); ++i) r[i] += p.c[i];
  for (std::size_t i = 0; i < q.c.size(); ++i) r[i] += q.c[i];
  return Poly(std::move(r));
}

inline Poly poly_scale(const Poly& p, double s) {
  std::vector<double> r = p.c;
  for (double& v : r) v *= s;
  return Poly(std::move(r));
}

inline Poly poly_mul(const Poly& p, const Poly& q) {
  std::vector<double> r(p.c.size() + q.c.size() - 1, 0.0);
  for (std::size_t i = 0; i < p.c.size(); ++i)
    for (std::size_t j = 0; j < q.c.size(); ++j) r[i + j] += p.c[i] * q.c[j];
  return Poly(std::move(r));
}

inline Poly poly_derivative(const Poly& p) {
  if (p.c.size() <= 1) return Poly();
  std::vector<double> r(p.c.size() - 1);
  for (std::size_t i = 1; i < p.c.size(); ++i) r[i - 1] = p.c[i] * static_cast<double>(i);
  return Poly(std::move(r));
}

// Antiderivative with zero constant term.
inline Poly poly_antiderivative(const Poly& p) {
  std::vector<double> r(p.c.size() + 1, 0.0);
  for (std::size_t i = 0; i < p.c.size(); ++i) r[i + 1] = p.c[i] / static_cast<double>(i + 1);
  return Poly(std::move(r));
}

// r(x) = p(a x + b), expanded exactly.
inline Poly poly_affine(const Poly& p, double a, double b) {
  Poly result = Poly::constant(0.0);
  Poly power = Poly::constant(1.0);
  Poly inner(std::vector<double>{b, a});
  for (std::size_t i = 0; i < p.c.size(); ++i) {
    if (p.c[i] != 0.0) result = poly_add(result, poly_scale(power, p.c[i]));
    if (i + 1 < p.c.size()) power = poly_mul(power, inner);
  }
  return result;
}

inline double poly_integral(const Poly& p, double a, double b) {
  Poly f = poly_antiderivative(p);
  return f.eval(b) - f.eval(a);
}

// Real roots inside (lo, hi), via the companion matrix; near-zero leading
// coefficients are dropped relative to the largest one.
inline std::vector<double> poly_real_roots(const Poly& p, double lo, double hi) {
  std::vector<double> c = p.c;
  double biggest = 0;
  for (double v : c) biggest = std::max(biggest, std::abs(v));
  if (biggest == 0) return {};
  while (c.size() > 1 && std::abs(c.back()) <= 1e-14 * biggest) c.pop_back();
  const int d = static_cast<int>(c.size()) - 1;
  if (d < 1) return {};
  std::vector<double> roots;
  if (d == 1) {
    roots.push_back(-c[0] / c[1]);
  } else {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
    for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) companion(i, d - 1) = -c[static_cast<std::size_t>(i)] / c.back();
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    for (int i = 0; i < d; ++i) {
      const std::complex<double> z = es.eigenvalues()[i];
      if (std::abs(z.imag()) <= 1e-9 * std::max(1.0, std::abs(z.real())))
        roots.push_back(z.real());
    }
  }
  std::vector<double> inside;
  for (double r : roots)
    if (r > lo && r < hi) inside.push_back(r);
  std::sort(inside.begin(), inside.end());
  return inside;
}

// Integral of |p| over [a, b]: split at the sign changes, then the sign is
// constant on each cell and |integral| = integral of the absolute value.
inline double poly_abs_integral(const Poly& p, double a, double b) {
  if (b <= a) return 0;
  std::vector<double> cuts = poly_real_roots(p, a, b);
  cuts.insert(cuts.begin(), a);
  cuts.push_back(b);
  double total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    total += std::abs(poly_integral(p, cuts[i], cuts[i + 1]));
  return total;
}

// ---------------------------------------------------------------------------
// Compactly supported piecewise polynomials

// pieces[i] lives on [breaks[i], breaks[i+1]); the function is zero outside
// [breaks.front(), breaks.back()].
struct PiecewisePoly {
  std::vector<double> breaks;
  std::vector<Poly> pieces;

  bool empty() const { return pieces.empty(); }

  double eval(double x) const {
    if (empty() || x < breaks.front() || x >= breaks.back()) return 0;
    auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
    const std::size_t cell = static_cast<std::size_t>(it - breaks.begin()) - 1;
    return pieces[std::min(cell, pieces.size() - 1)].eval(x);
  }

  double integral(double a, double b) const {
    if (empty() || b <= a) return 0;
    double total = 0;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const double lo = std::max(a, breaks[i]), hi = std::min(b, breaks[i + 1]);
      if (hi > lo) total += poly_integral(pieces[i], lo, hi);
    }
    return total;
  }

  double mass() const { return empty() ? 0.0 : integral(breaks.front(), breaks.back()); }
};

inline PiecewisePoly pw_boxcar(double lo, double hi, double height) {
  if (hi <= lo || height == 0.0) return {};
  PiecewisePoly f;
  f.breaks = {lo, hi};
  f.pieces = {Poly::constant(height)};
  return f;
}

inline PiecewisePoly pw_scale(const PiecewisePoly& f, double s) {
  if (s == 0.0) return {};
  PiecewisePoly g = f;
  for (Poly& p : g.pieces) p = poly_scale(p, s);
  return g;
}

// integral of f(x) q(x) over [a, b]
inline double pw_product_integral(const PiecewisePoly& f, const Poly& q, double a, double b) {
  if (f.empty() || b <= a) return 0;
  double total = 0;
  for (std::size_t i = 0; i < f.pieces.size(); ++i) {
    const double lo = std::max(a, f.breaks[i]), hi = std::min(b, f.breaks[i + 1]);
    if (hi > lo) total += poly_integral(poly_mul(f.pieces[i], q), lo, hi);
  }
  return total;
}

// integral of f(x) |q(x)| over [a, b]; f must be nonnegative for this to be
// the weighted total variation of the density q.
inline double pw_product_abs_integral(const PiecewisePoly& f, const Poly& q, double a, double b) {
  if (f.empty() || b <= a) return 0;
  double total = 0;
  for (std::size_t i = 0; i < f.pieces.size(); ++i) {
    const double lo = std::max(a, f.breaks[i]), hi = std::min(b, f.breaks[i + 1]);
    if (hi <= lo) continue;
    std::vector<double> cuts = poly_real_roots(q, lo, hi);
    cuts.insert(cuts.begin(), lo);
    cuts.push_back(hi);
    const Poly prod = poly_mul(f.pieces[i], q);
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s)
      total += std::abs(poly_integral(prod, cuts[s], cuts[s + 1]));
  }
  return total;
}

namespace detail {

// Running antiderivative F(x) = integral of f over (-inf, x]: polynomial on
// each cell, 0 before the support, constant (the mass) after it.
struct RunningAntiderivative {
  std::vector<double> breaks;
  std::vector<Poly> pieces;  // valid on their cells, already offset
  double total = 0;

  // the piece describing F on the cell that contains x, as a Poly in x
  Poly piece_at(double x) const {
    if (breaks.empty() || x < breaks.front()) return Poly::constant(0.0);
    if (x >= breaks.back()) return Poly::constant(total);
    auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
    return pieces[static_cast<std::size_t>(it - breaks.begin()) - 1];
  }
};

inline RunningAntiderivative pw_running_antiderivative(const PiecewisePoly& f) {
  RunningAntiderivative F;
  F.breaks = f.breaks;
  double acc = 0;
  for (std::size_t i = 0; i < f.pieces.size(); ++i) {
    Poly anti = poly_antiderivative(f.pieces[i]);
    Poly piece = poly_add(anti, Poly::constant(acc - anti.eval(f.breaks[i])));
    F.pieces.push_back(piece);
    acc = piece.eval(f.breaks[i + 1]);
  }
  F.total = acc;
  return F;
}

}  // namespace detail

// Convolution with height * indicator([lo, hi]):
//   (f * box)(t) = height * (F(t - lo) - F(t - hi)).
// The result is again piecewise polynomial, supported on
// [support(f).lo + lo, support(f).hi + hi].
inline PiecewisePoly pw_convolve_boxcar(const PiecewisePoly& f, double lo, double hi,
                                        double height) {
  if (f.empty() || hi <= lo || height == 0.0) return {};
  const detail::RunningAntiderivative F = detail::pw_running_antiderivative(f);

  std::vector<double> breaks;
  for (double x : f.breaks) {
    breaks.push_back(x + lo);
    breaks.push_back(x + hi);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-15; }),
               breaks.end());

  PiecewisePoly g;
  g.breaks = breaks;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double mid = 0.5 * (breaks[i] + breaks[i + 1]);
    Poly left = poly_affine(F.piece_at(mid - lo), 1.0, -lo);
    Poly right = poly_affine(F.piece_at(mid - hi), 1.0, -hi);
    g.pieces.push_back(poly_scale(poly_add(left, poly_scale(right, -1.0)), height));
  }
  return g;
}

}  // namespace symlab

#pragma once

// One-dimensional BV derivative measures, decomposed into an absolutely
// continuous part (piecewise polynomial densities), atoms, and scaled copies
// of the Cantor measure.  Evaluation on interval unions is exact: polynomial
// antiderivatives, atom sums, and ternary endpoint evaluation respectively.

#include "symlab/cantor.hpp"
#include "symlab/piecewise_poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace symlab {

struct Interval {
  double lo = 0, hi = 0;
  double length() const { return hi - lo; }
};

struct AcPiece {
  double lo = 0, hi = 0;
  Poly density;
};

struct JumpAtom {
  double t = 0;
  double h = 0;  // signed height
};

struct CantorComponent {
  double lo = 0, hi = 0;  // carrier interval
  double amplitude = 0;   // signed total mass
};

struct BVProfile1D {
  std::vector<AcPiece> ac;
  std::vector<JumpAtom> jumps;
  std::vector<CantorComponent> cantor;
};

enum class Part { ac, jump, cantor, all };

inline void validate_profile(const BVProfile1D& p) {
  for (const AcPiece& piece : p.ac)
    if (!(piece.lo <= piece.hi)) throw std::invalid_argument("profile: ac piece with lo > hi");
  for (const CantorComponent& comp : p.cantor)
    if (!(comp.lo < comp.hi))
      throw std::invalid_argument("profile: cantor component needs positive length");
}

// Smallest interval containing every component (atoms included).
inline Interval profile_hull(const BVProfile1D& p) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  auto absorb = [&](double a, double b) {
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  };
  for (const AcPiece& piece : p.ac) absorb(piece.lo, piece.hi);
  for (const JumpAtom& atom : p.jumps) absorb(atom.t, atom.t);
  for (const CantorComponent& comp : p.cantor) absorb(comp.lo, comp.hi);
  if (lo > hi) return {0, 0};
  return {lo, hi};
}

// Measure of a closed interval.  Atoms sitting exactly on an endpoint are
// included, so callers passing unions should keep the intervals disjoint.
inline double bv1d_measure(const BVProfile1D& p, const Interval& B, Part part) {
  double total = 0;
  if (part == Part::ac || part == Part::all)
    for (const AcPiece& piece : p.ac) {
      const double lo = std::max(B.lo, piece.lo), hi = std::min(B.hi, piece.hi);
      if (hi > lo) total += poly_integral(piece.density, lo, hi);
    }
  if (part == Part::jump || part == Part::all)
    for (const JumpAtom& atom : p.jumps)
      if (atom.t >= B.lo && atom.t <= B.hi) total += atom.h;
  if (part == Part::cantor || part == Part::all)
    for (const CantorComponent& comp : p.cantor) {
      const double len = comp.hi - comp.lo;
      total += comp.amplitude * cantor_measure_interval(std::max(0.0, (B.lo - comp.lo) / len),
                                                        std::min(1.0, (B.hi - comp.lo) / len));
    }
  return total;
}

inline double bv1d_measure(const BVProfile1D& p, const std::vector<Interval>& B, Part part) {
  double total = 0;
  for (const Interval& I : B) total += bv1d_measure(p, I, part);
  return total;
}

// Right-continuous representative with value 0 left of the support:
// g(x) = D((-inf, x]).
inline double profile_cdf(const BVProfile1D& p, double x) {
  double value = 0;
  for (const AcPiece& piece : p.ac)
    if (x > piece.lo) value += poly_integral(piece.density, piece.lo, std::min(x, piece.hi));
  for (const JumpAtom& atom : p.jumps)
    if (atom.t <= x) value += atom.h;
  for (const CantorComponent& comp : p.cantor)
    value += comp.amplitude * cantor_function((x - comp.lo) / (comp.hi - comp.lo));
  return value;
}

namespace detail {

// Value at s of the m-fold antiderivative of one ac piece's cdf contribution,
// with every integration constant fixed by vanishing left of the support.
inline double ac_piece_iterated_antiderivative(const AcPiece& piece, int m, double s) {
  Poly Q = poly_antiderivative(piece.density);
  Poly inner = poly_add(Q, Poly::constant(-Q.eval(piece.lo)));  // on [lo, hi]
  Poly tail = Poly::constant(inner.eval(piece.hi));             // right of hi
  for (int fold = 0; fold < m; ++fold) {
    Poly anti = poly_antiderivative(inner);
    inner = poly_add(anti, Poly::constant(-anti.eval(piece.lo)));
    Poly tail_anti = poly_antiderivative(tail);
    tail = poly_add(tail_anti, Poly::constant(inner.eval(piece.hi) - tail_anti.eval(piece.hi)));
  }
  if (s <= piece.lo) return 0;
  if (s >= piece.hi) return tail.eval(s);
  return inner.eval(s);
}

}  // namespace detail

// m-fold antiderivative of the cdf, vanishing left of the support.  Atoms
// turn into truncated powers h (s-t)^m / m!; ac pieces integrate in closed
// form.  Iterated antiderivatives of the Cantor function are not closed form,
// so cantor components are only allowed at m = 0.
inline double profile_iterated_antiderivative(const BVProfile1D& p, int m, double s) {
  if (m == 0) return profile_cdf(p, s);
  if (m < 0) throw std::invalid_argument("profile_iterated_antiderivative: negative order");
  if (!p.cantor.empty())
    throw std::invalid_argument(
        "profile_iterated_antiderivative: cantor parts have no closed-form antiderivative");
  double mfact = 1;
  for (int i = 2; i <= m; ++i) mfact *= i;
  double value = 0;
  for (const AcPiece& piece : p.ac)
    value += detail::ac_piece_iterated_antiderivative(piece, m, s);
  for (const JumpAtom& atom : p.jumps)
    if (s >= atom.t) value += atom.h * std::pow(s - atom.t, m) / mfact;
  return value;
}

namespace detail {

// Sorted breakpoints of the combined ac density restricted to [lo, hi].
inline std::vector<double> ac_breakpoints(const BVProfile1D& p, double lo, double hi) {
  std::vector<double> cuts{lo, hi};
  for (const AcPiece& piece : p.ac) {
    if (piece.lo > lo && piece.lo < hi) cuts.push_back(piece.lo);
    if (piece.hi > lo && piece.hi < hi) cuts.push_back(piece.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

inline Poly ac_combined_density(const BVProfile1D& p, double at) {
  Poly sum = Poly::constant(0.0);
  for (const AcPiece& piece : p.ac)
    if (at >= piece.lo && at < piece.hi) sum = poly_add(sum, piece.density);
  return sum;
}

// Atoms merged by location (heights at the same point add before taking
// absolute values).
inline std::vector<JumpAtom> merged_atoms(const BVProfile1D& p) {
  std::vector<JumpAtom> atoms = p.jumps;
  std::sort(atoms.begin(), atoms.end(), [](const JumpAtom& a, const JumpAtom& b) { return a.t < b.t; });
  std::vector<JumpAtom> merged;
  for (const JumpAtom& atom : atoms) {
    if (!merged.empty() && std::abs(atom.t - merged.back().t) <= 1e-12)
      merged.back().h += atom.h;
    else
      merged.push_back(atom);
  }
  return merged;
}

// Cantor components merged when their carriers coincide; overlapping but
// non-identical carriers share Cantor-set mass and are rejected.
inline std::vector<CantorComponent> merged_cantor(const BVProfile1D& p) {
  std::vector<CantorComponent> comps = p.cantor;
  std::sort(comps.begin(), comps.end(),
            [](const CantorComponent& a, const CantorComponent& b) { return a.lo < b.lo; });
  std::vector<CantorComponent> merged;
  for (const CantorComponent& comp : comps) {
    if (!merged.empty() && std::abs(comp.lo - merged.back().lo) <= 1e-12 &&
        std::abs(comp.hi - merged.back().hi) <= 1e-12) {
      merged.back().amplitude += comp.amplitude;
    } else {
      if (!merged.empty() && comp.lo < merged.back().hi - 1e-12)
        throw std::invalid_argument(
            "total variation: overlapping cantor carriers are not mutually singular");
      merged.push_back(comp);
    }
  }
  return merged;
}

}  // namespace detail

// |D|([lo, hi]) for the combined measure.  The three parts are mutually
// singular (Lebesgue / atomic / Cantor), so their variations add; within each
// part contributions at the same location are merged first.
inline double profile_total_variation(const BVProfile1D& p, const Interval& B) {
  double total = 0;
  const std::vector<double> cuts = detail::ac_breakpoints(p, B.lo, B.hi);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Poly density = detail::ac_combined_density(p, 0.5 * (cuts[i] + cuts[i + 1]));
    total += poly_abs_integral(density, cuts[i], cuts[i + 1]);
  }
  for (const JumpAtom& atom : detail::merged_atoms(p))
    if (atom.t >= B.lo && atom.t <= B.hi) total += std::abs(atom.h);
  for (const CantorComponent& comp : detail::merged_cantor(p)) {
    const double len = comp.hi - comp.lo;
    total += std::abs(comp.amplitude) *
             cantor_measure_interval(std::max(0.0, (B.lo - comp.lo) / len),
                                     std::min(1.0, (B.hi - comp.lo) / len));
  }
  return total;
}

inline double profile_total_variation(const BVProfile1D& p) {
  return profile_total_variation(p, profile_hull(p));
}

// integral of the weight against the signed measure (selected part).
inline double profile_weighted_measure(const BVProfile1D& p, const PiecewisePoly& w, Part part) {
  if (w.empty()) return 0;
  double total = 0;
  if (part == Part::ac || part == Part::all)
    for (const AcPiece& piece : p.ac)
      total += pw_product_integral(w, piece.density, piece.lo, piece.hi);
  if (part == Part::jump || part == Part::all)
    for (const JumpAtom& atom : p.jumps) total += atom.h * w.eval(atom.t);
  if (part == Part::cantor || part == Part::all)
    for (const CantorComponent& comp : p.cantor)
      for (std::size_t i = 0; i < w.pieces.size(); ++i)
        total += comp.amplitude * cantor_poly_integral_scaled(w.pieces[i], comp.lo, comp.hi,
                                                              w.breaks[i], w.breaks[i + 1]);
  return total;
}

// integral of a nonnegative weight against |D|, with the same same-location
// merging as profile_total_variation.
inline double profile_weighted_variation(const BVProfile1D& p, const PiecewisePoly& w) {
  if (w.empty()) return 0;
  double total = 0;
  const std::vector<double> cuts = detail::ac_breakpoints(p, w.breaks.front(), w.breaks.back());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Poly density = detail::ac_combined_density(p, 0.5 * (cuts[i] + cuts[i + 1]));
    if (!density.is_zero()) total += pw_product_abs_integral(w, density, cuts[i], cuts[i + 1]);
  }
  for (const JumpAtom& atom : detail::merged_atoms(p)) total += std::abs(atom.h) * w.eval(atom.t);
  for (const CantorComponent& comp : detail::merged_cantor(p))
    for (std::size_t i = 0; i < w.pieces.size(); ++i)
      total += std::abs(comp.amplitude) * cantor_poly_integral_scaled(w.pieces[i], comp.lo,
                                                                      comp.hi, w.breaks[i],
                                                                      w.breaks[i + 1]);
  return total;
}

// Scale every component by kappa (the profile of kappa * g).
inline BVProfile1D profile_scaled(const BVProfile1D& p, double kappa) {
  BVProfile1D out;
  if (kappa == 0.0) return out;
  for (const AcPiece& piece : p.ac)
    out.ac.push_back({piece.lo, piece.hi, poly_scale(piece.density, kappa)});
  for (const JumpAtom& atom : p.jumps) out.jumps.push_back({atom.t, kappa * atom.h});
  for (const CantorComponent& comp : p.cantor)
    out.cantor.push_back({comp.lo, comp.hi, kappa * comp.amplitude});
  return out;
}

// Concatenate components; evaluation is linear, so this is the sum measure.
inline BVProfile1D profile_sum(const BVProfile1D& a, const BVProfile1D& b) {
  BVProfile1D out = a;
  out.ac.insert(out.ac.end(), b.ac.begin(), b.ac.end());
  out.jumps.insert(out.jumps.end(), b.jumps.begin(), b.jumps.end());
  out.cantor.insert(out.cantor.end(), b.cantor.begin(), b.cantor.end());
  return out;
}

// The profile of t -> g(c + s t) for s != 0: the chain rule for the ac part,
// relocation with a sign flip for decreasing s on atoms, and carrier
// reflection (the Cantor measure is reflection symmetric) for cantor parts.
inline BVProfile1D profile_affine_section(const BVProfile1D& p, double c, double s) {
  if (s == 0.0) throw std::invalid_argument("profile_affine_section: s must be nonzero");
  BVProfile1D out;
  const double sign = s > 0 ? 1.0 : -1.0;
  for (const AcPiece& piece : p.ac) {
    double a = (piece.lo - c) / s, b = (piece.hi - c) / s;
    if (a > b) std::swap(a, b);
    out.ac.push_back({a, b, poly_scale(poly_affine(piece.density, s, c), s)});
  }
  for (const JumpAtom& atom : p.jumps) out.jumps.push_back({(atom.t - c) / s, sign * atom.h});
  for (const CantorComponent& comp : p.cantor) {
    double a = (comp.lo - c) / s, b = (comp.hi - c) / s;
    if (a > b) std::swap(a, b);
    out.cantor.push_back({a, b, sign * comp.amplitude});
  }
  return out;
}

}  // namespace symlab

#pragma once

// Synthetic BV fields built from one-dimensional profiles: u(x) is a finite
// sum of b_p G_p(x . nu_p) with G_p the (k-1)-fold antiderivative of the
// stored profile's cdf.  Applying a homogeneous operator of order k turns
// each term into the 1-D profile measure along nu_p with the constant
// W-weight  symbol(nu_p) b_p, which is what makes box evaluation exact.

#include "symlab/bv_profile.hpp"
#include "symlab/multi_index.hpp"
#include "symlab/operator.hpp"
#include "symlab/piecewise_poly.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace symlab {

using Box = std::vector<Interval>;

struct FieldTerm {
  Eigen::VectorXd nu;  // unit direction
  Eigen::VectorXd b;   // V-valued amplitude
  BVProfile1D profile;
};

struct SyntheticField {
  int n = 0;
  int dimV = 0;
  std::vector<FieldTerm> terms;
  Box box;
};

inline void validate_box(const Box& B, int n) {
  if (static_cast<int>(B.size()) != n) throw std::invalid_argument("box: wrong dimension");
  for (const Interval& I : B)
    if (!(I.lo <= I.hi)) throw std::invalid_argument("box: interval with lo > hi");
}

inline double box_volume(const Box& B) {
  double v = 1;
  for (const Interval& I : B) v *= I.length();
  return v;
}

inline Eigen::VectorXd box_corner(const Box& B, unsigned mask) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(B.size()));
  for (std::size_t i = 0; i < B.size(); ++i)
    x[static_cast<Eigen::Index>(i)] = (mask >> i) & 1u ? B[i].hi : B[i].lo;
  return x;
}

inline void validate_field(const SyntheticField& f) {
  if (f.n < 1 || f.dimV < 1) throw std::invalid_argument("field: dimensions must be positive");
  validate_box(f.box, f.n);
  for (const FieldTerm& term : f.terms) {
    if (term.nu.size() != f.n || term.b.size() != f.dimV)
      throw std::invalid_argument("field: term dimension mismatch");
    if (std::abs(term.nu.norm() - 1.0) > 1e-9)
      throw std::invalid_argument("field: directions must be unit vectors");
    validate_profile(term.profile);
  }
}

// ---------------------------------------------------------------------------
// Box geometry along a direction

// Density of the pushforward of Lebesgue measure on B under x -> x . nu; by
// the coarea formula this equals the sliced area t -> H^{n-1}(B /\ {x.nu=t}).
// Each nonzero component contributes a boxcar and the factors convolve; zero
// components only scale.  Degenerate boxes give the empty (zero) function.
inline PiecewisePoly box_cross_section(const Box& B, const Eigen::VectorXd& nu) {
  double constant = 1;
  PiecewisePoly cs;
  bool have = false;
  for (std::size_t i = 0; i < B.size(); ++i) {
    const double d = nu[static_cast<Eigen::Index>(i)];
    if (std::abs(d) <= 1e-14) {
      constant *= B[i].length();
      continue;
    }
    double a = d * B[i].lo, b = d * B[i].hi;
    if (a > b) std::swap(a, b);
    if (!have) {
      cs = pw_boxcar(a, b, 1.0 / std::abs(d));
      have = true;
    } else {
      cs = pw_convolve_boxcar(cs, a, b, 1.0 / std::abs(d));
    }
  }
  if (!have) throw std::invalid_argument("box_cross_section: direction is zero");
  if (constant == 0.0) return {};
  return constant == 1.0 ? cs : pw_scale(cs, constant);
}

// H^{n-1} of B /\ {x.nu = t}.  For a solid box this is the cross-section
// density; a degenerate box carries positive area only when it lies inside
// the hyperplane itself (exactly one collapsed axis, nu along it).
inline double box_patch_area(const Box& B, const Eigen::VectorXd& nu, double t,
                             const PiecewisePoly& cross_section) {
  int collapsed = -1;
  int count = 0;
  double scale = 0;
  for (std::size_t i = 0; i < B.size(); ++i) {
    scale = std::max({scale, std::abs(B[i].lo), std::abs(B[i].hi)});
    if (B[i].length() == 0.0) {
      collapsed = static_cast<int>(i);
      ++count;
    }
  }
  if (count == 0) return cross_section.eval(t);
  if (count > 1) return 0;
  if (std::abs(std::abs(nu[collapsed]) - 1.0) > 1e-12) return 0;
  if (std::abs(nu[collapsed] * B[static_cast<std::size_t>(collapsed)].lo - t) >
      1e-12 * std::max(1.0, scale))
    return 0;
  double area = 1;
  for (std::size_t i = 0; i < B.size(); ++i)
    if (static_cast<int>(i) != collapsed) area *= B[i].length();
  return area;
}

// Parameter interval of {t : x0 + t xi in B}, empty when the line misses.
inline bool line_box_clip(const Box& B, const Eigen::VectorXd& x0, const Eigen::VectorXd& xi,
                          Interval& out) {
  double t0 = -std::numeric_limits<double>::infinity();
  double t1 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < B.size(); ++i) {
    const double d = xi[static_cast<Eigen::Index>(i)];
    const double x = x0[static_cast<Eigen::Index>(i)];
    if (std::abs(d) <= 1e-15) {
      if (x < B[i].lo || x > B[i].hi) return false;
      continue;
    }
    double a = (B[i].lo - x) / d, b = (B[i].hi - x) / d;
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
  }
  if (!(t0 <= t1)) return false;
  out = {t0, t1};
  return true;
}

// ---------------------------------------------------------------------------
// Pointwise evaluation

// u(x) for an operator of the given order; the profile stores the (k-1)-th
// derivative, so u needs (k-1) antiderivative folds.
inline Eigen::VectorXd field_value(const SyntheticField& f, int order, const Eigen::VectorXd& x) {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(f.dimV);
  for (const FieldTerm& term : f.terms)
    u += term.b * profile_iterated_antiderivative(term.profile, order - 1, x.dot(term.nu));
  return u;
}

// Coordinates of grad^(k-1) u at x: each term contributes the pure tensor
// b (x) nu^(k-1) scaled by the profile cdf.
inline Eigen::VectorXd field_tensor_coords(const SyntheticField& f, int order,
                                           const Eigen::VectorXd& x) {
  const int m = order - 1;
  Eigen::VectorXd U =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(multiindex_count(f.n, m)) * f.dimV);
  for (const FieldTerm& term : f.terms)
    U += tensor_coords(term.b, term.nu, m) * profile_cdf(term.profile, x.dot(term.nu));
  return U;
}

// Scalar line section: the 1-D derivative profile of
//   t -> sum_p kappa_p g_p(x0 . nu_p + t (xi . nu_p)).
// Terms with xi nearly orthogonal to nu_p are constant along the line and
// are skipped.
inline BVProfile1D field_section_profile(const SyntheticField& f, const std::vector<double>& kappa,
                                         const Eigen::VectorXd& x0, const Eigen::VectorXd& xi,
                                         double align_tol = 1e-8) {
  if (kappa.size() != f.terms.size())
    throw std::invalid_argument("field_section_profile: one kappa per term required");
  BVProfile1D out;
  for (std::size_t p = 0; p < f.terms.size(); ++p) {
    if (kappa[p] == 0.0) continue;
    const double s = xi.dot(f.terms[p].nu);
    if (std::abs(s) <= align_tol) continue;
    out = profile_sum(out, profile_scaled(
                               profile_affine_section(f.terms[p].profile, x0.dot(f.terms[p].nu), s),
                               kappa[p]));
  }
  return out;
}

// ---------------------------------------------------------------------------
// The operator applied to a synthetic field

// A u as a finite sum of 1-D profile measures along fixed directions, each
// carrying the constant W-weight symbol(nu_p) b_p.
struct MeasureRep {
  int n = 0, dimW = 0, order = 0;
  struct Component {
    Eigen::VectorXd nu;
    BVProfile1D profile;
    Eigen::VectorXd weight;
  };
  std::vector<Component> components;
};

inline MeasureRep apply_operator_analytic(const Operator& op, const SyntheticField& f) {
  validate_operator(op);
  validate_field(f);
  if (f.n != op.n || f.dimV != op.dimV)
    throw std::invalid_argument("apply_operator_analytic: operator/field dimension mismatch");
  MeasureRep rep;
  rep.n = op.n;
  rep.dimW = op.dimW;
  rep.order = op.order;
  for (const FieldTerm& term : f.terms)
    rep.components.push_back({term.nu, term.profile, symbol_eval(op, term.nu) * term.b});
  return rep;
}

// Density of the absolutely continuous part at x.
inline Eigen::VectorXd measure_density_at(const MeasureRep& rep, const Eigen::VectorXd& x) {
  Eigen::VectorXd density = Eigen::VectorXd::Zero(rep.dimW);
  for (const MeasureRep::Component& comp : rep.components) {
    const double t = x.dot(comp.nu);
    double value = 0;
    for (const AcPiece& piece : comp.profile.ac)
      if (t >= piece.lo && t < piece.hi) value += piece.density.eval(t);
    density += value * comp.weight;
  }
  return density;
}

// Exact mass of the selected part on an axis box.  Absolutely continuous and
// cantor parts integrate the box cross-section against the 1-D profile; atoms
// weight the sliced patch area.
inline Eigen::VectorXd measure_on_box(const MeasureRep& rep, const Box& B, Part part) {
  validate_box(B, rep.n);
  Eigen::VectorXd total = Eigen::VectorXd::Zero(rep.dimW);
  for (const MeasureRep::Component& comp : rep.components) {
    const PiecewisePoly cs = box_cross_section(B, comp.nu);
    double mass = 0;
    if (part == Part::ac || part == Part::all)
      mass += profile_weighted_measure(comp.profile, cs, Part::ac);
    if (part == Part::cantor || part == Part::all)
      mass += profile_weighted_measure(comp.profile, cs, Part::cantor);
    if (part == Part::jump || part == Part::all)
      for (const JumpAtom& atom : comp.profile.jumps)
        mass += atom.h * box_patch_area(B, comp.nu, atom.t, cs);
    total += mass * comp.weight;
  }
  return total;
}

}  // namespace symlab

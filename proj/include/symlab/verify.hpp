#pragma once

// Numerical verification of the one-dimensional slicing identities on
// synthetic fields: line sections against spectral pairs, jump densities,
// hyperplane sections through a slice operator, and a finite-difference
// crosscheck of the analytic measure representation.

#include "symlab/bv_profile.hpp"
#include "symlab/classify.hpp"
#include "symlab/linearize.hpp"
#include "symlab/multi_index.hpp"
#include "symlab/operator.hpp"
#include "symlab/slice.hpp"
#include "symlab/synthetic_field.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace symlab {

namespace detail {

// O(h^2) central difference for the m-th derivative: offset -> coefficient,
// to be divided by h^m.
inline const std::vector<std::pair<int, double>>& central_stencil(int m) {
  static const std::vector<std::vector<std::pair<int, double>>> table = {
      {{0, 1.0}},
      {{-1, -0.5}, {1, 0.5}},
      {{-1, 1.0}, {0, -2.0}, {1, 1.0}},
      {{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}},
      {{-2, 1.0}, {-1, -4.0}, {0, 6.0}, {1, -4.0}, {2, 1.0}},
  };
  if (m < 0 || m >= static_cast<int>(table.size()))
    throw std::invalid_argument("central_stencil: only derivative orders up to 4");
  return table[static_cast<std::size_t>(m)];
}

inline int stencil_reach(int m) {
  int r = 0;
  for (const auto& [offset, coeff] : central_stencil(m)) r = std::max(r, std::abs(offset));
  return r;
}

// Quadrature stations on the hyperplane orthogonal to xi: midpoint grids over
// the bounding rectangle of the projected box.  Points whose line misses the
// box contribute nothing, so a non-tight hull only wastes stations.
inline std::vector<std::pair<Eigen::VectorXd, double>> transverse_stations(
    const Box& B, const Eigen::VectorXd& xi, int lines) {
  const int n = static_cast<int>(B.size());
  std::vector<std::pair<Eigen::VectorXd, double>> stations;
  if (n == 1) {
    stations.push_back({Eigen::VectorXd::Zero(1), 1.0});
    return stations;
  }
  if (n > 3) throw std::invalid_argument("transverse quadrature supports n <= 3");
  const Eigen::MatrixXd H = hyperplane_basis(xi);
  const int dims = n - 1;
  Eigen::VectorXd zlo = Eigen::VectorXd::Constant(dims, std::numeric_limits<double>::infinity());
  Eigen::VectorXd zhi = -zlo;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    const Eigen::VectorXd z = H.transpose() * box_corner(B, mask);
    zlo = zlo.cwiseMin(z);
    zhi = zhi.cwiseMax(z);
  }
  if (dims == 1) {
    const double dz = (zhi[0] - zlo[0]) / lines;
    for (int i = 0; i < lines; ++i)
      stations.push_back({H * Eigen::VectorXd::Constant(1, zlo[0] + (i + 0.5) * dz), dz});
  } else {
    const int g = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(lines))));
    const double dz0 = (zhi[0] - zlo[0]) / g, dz1 = (zhi[1] - zlo[1]) / g;
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) {
        Eigen::VectorXd z(2);
        z << zlo[0] + (i + 0.5) * dz0, zlo[1] + (j + 0.5) * dz1;
        stations.push_back({H * z, dz0 * dz1});
      }
  }
  return stations;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Finite-difference crosscheck of the analytic density

// Max relative error between A u computed by O(h^2) central differences and
// the analytic absolutely continuous density.  Requires purely ac profiles
// (u must be pointwise smooth near the sample points) and stencils that stay
// inside the box.
inline double finite_difference_crosscheck(const Operator& op, const SyntheticField& field,
                                           const std::vector<Eigen::VectorXd>& points, double h) {
  validate_operator(op);
  validate_field(field);
  if (field.n != op.n || field.dimV != op.dimV)
    throw std::invalid_argument("finite_difference_crosscheck: dimension mismatch");
  if (op.order > 4)
    throw std::invalid_argument("finite_difference_crosscheck: stencils cover order <= 4");
  if (!(h > 0)) throw std::invalid_argument("finite_difference_crosscheck: h must be positive");
  for (const FieldTerm& term : field.terms)
    if (!term.profile.jumps.empty() || !term.profile.cantor.empty())
      throw std::invalid_argument(
          "finite_difference_crosscheck: profiles must be absolutely continuous");

  std::vector<int> reach(static_cast<std::size_t>(op.n), 0);
  for (const MultiIndex& alpha : op.alphas)
    for (int i = 0; i < op.n; ++i)
      reach[static_cast<std::size_t>(i)] =
          std::max(reach[static_cast<std::size_t>(i)], detail::stencil_reach(alpha[static_cast<std::size_t>(i)]));

  const MeasureRep rep = apply_operator_analytic(op, field);
  double worst = 0;
  for (const Eigen::VectorXd& x : points) {
    if (x.size() != op.n)
      throw std::invalid_argument("finite_difference_crosscheck: point dimension mismatch");
    for (int i = 0; i < op.n; ++i) {
      const double margin = reach[static_cast<std::size_t>(i)] * h;
      if (x[i] - margin < field.box[static_cast<std::size_t>(i)].lo ||
          x[i] + margin > field.box[static_cast<std::size_t>(i)].hi)
        throw std::invalid_argument(
            "finite_difference_crosscheck: stencil leaves the box at a sample point");
    }

    Eigen::VectorXd fd = Eigen::VectorXd::Zero(op.dimW);
    for (std::size_t a = 0; a < op.alphas.size(); ++a) {
      if (op.coeffs[a].squaredNorm() == 0) continue;
      const MultiIndex& alpha = op.alphas[a];
      // tensor product of the per-dimension stencils
      std::vector<std::pair<Eigen::VectorXd, double>> nodes{{x, 1.0}};
      for (int i = 0; i < op.n; ++i) {
        if (alpha[static_cast<std::size_t>(i)] == 0) continue;
        std::vector<std::pair<Eigen::VectorXd, double>> next;
        for (const auto& [pt, cf] : nodes)
          for (const auto& [offset, scoef] : detail::central_stencil(alpha[static_cast<std::size_t>(i)])) {
            Eigen::VectorXd shifted = pt;
            shifted[i] += offset * h;
            next.push_back({shifted, cf * scoef});
          }
        nodes = std::move(next);
      }
      Eigen::VectorXd deriv = Eigen::VectorXd::Zero(op.dimV);
      for (const auto& [pt, cf] : nodes) deriv += cf * field_value(field, op.order, pt);
      fd += op.coeffs[a] * deriv / std::pow(h, op.order);
    }

    const Eigen::VectorXd exact = measure_density_at(rep, x);
    worst = std::max(worst, (fd - exact).norm() / std::max(1.0, exact.norm()));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Line slicing against a spectral pair

struct PartComparison {
  double lhs = 0, rhs = 0, abs_err = 0;
};

struct LineSliceReport {
  PartComparison ac, jump, cantor, total, tv;
  bool tv_available = false;
  bool degenerate_alignment = false;
  int lines = 0;
  double pair_fit_residual = 0;
};

// Checks, part by part, that the scalar measure <w, A u> equals the fibered
// integral over lines x0 + t xi of the sections' derivative measures, where w
// is the witness of the spectral pair (xi, coordinate) of the linearized
// operator (of the operator itself at order one).  The total variation
// comparison is available when all terms share one direction, in which case
// |<w, A u>| reduces to a single merged 1-D profile.
inline LineSliceReport verify_line_slicing(const Operator& op, const SyntheticField& field,
                                           const Eigen::VectorXd& xi,
                                           const Eigen::VectorXd& coordinate, const Box& B,
                                           int lines, const Tolerances& tol = {}) {
  validate_operator(op);
  validate_field(field);
  if (field.n != op.n || field.dimV != op.dimV)
    throw std::invalid_argument("verify_line_slicing: operator/field dimension mismatch");
  validate_box(B, op.n);
  if (lines < 1) throw std::invalid_argument("verify_line_slicing: need at least one line");
  if (xi.size() != op.n || xi.norm() == 0)
    throw std::invalid_argument("verify_line_slicing: xi must be a nonzero direction");
  const Eigen::VectorXd xi_unit = xi / xi.norm();

  const LinearizedOperator lin = linearize(op);
  if (coordinate.size() != lin.d_op.dimV)
    throw std::invalid_argument("verify_line_slicing: coordinate has wrong dimension");
  const WitnessFit fit = witness_for_pair(lin.d_op, xi_unit, coordinate);
  if (fit.residual > tol.residual_tol)
    throw std::invalid_argument("verify_line_slicing: (xi, coordinate) is not a spectral pair");
  const Eigen::VectorXd w = fit.witness.head(op.dimW);

  LineSliceReport report;
  report.lines = lines;
  report.pair_fit_residual = fit.residual;

  const int m = op.order - 1;
  std::vector<double> kappa;
  for (const FieldTerm& term : field.terms) {
    kappa.push_back(coordinate.dot(tensor_coords(term.b, term.nu, m)));
    if (std::abs(xi_unit.dot(term.nu)) <= 1e-8 &&
        (!term.profile.jumps.empty() || !term.profile.cantor.empty()))
      report.degenerate_alignment = true;
  }

  const MeasureRep rep = apply_operator_analytic(op, field);
  report.ac.lhs = w.dot(measure_on_box(rep, B, Part::ac));
  report.jump.lhs = w.dot(measure_on_box(rep, B, Part::jump));
  report.cantor.lhs = w.dot(measure_on_box(rep, B, Part::cantor));

  report.tv_available = true;
  for (const FieldTerm& term : field.terms)
    if ((term.nu - field.terms.front().nu).norm() > 1e-12) report.tv_available = false;
  if (report.tv_available && !field.terms.empty()) {
    BVProfile1D merged;
    for (std::size_t p = 0; p < field.terms.size(); ++p)
      merged = profile_sum(merged,
                           profile_scaled(rep.components[p].profile, w.dot(rep.components[p].weight)));
    report.tv.lhs =
        profile_weighted_variation(merged, box_cross_section(B, field.terms.front().nu));
  }

  for (const auto& [x0, weight] : detail::transverse_stations(B, xi_unit, lines)) {
    Interval clip;
    if (!line_box_clip(B, x0, xi_unit, clip)) continue;
    const BVProfile1D section = field_section_profile(field, kappa, x0, xi_unit);
    report.ac.rhs += weight * bv1d_measure(section, clip, Part::ac);
    report.jump.rhs += weight * bv1d_measure(section, clip, Part::jump);
    report.cantor.rhs += weight * bv1d_measure(section, clip, Part::cantor);
    if (report.tv_available) report.tv.rhs += weight * profile_total_variation(section, clip);
  }

  report.total.lhs = report.ac.lhs + report.jump.lhs + report.cantor.lhs;
  report.total.rhs = report.ac.rhs + report.jump.rhs + report.cantor.rhs;
  for (PartComparison* part : {&report.ac, &report.jump, &report.cantor, &report.total, &report.tv})
    part->abs_err = std::abs(part->lhs - part->rhs);
  return report;
}

// ---------------------------------------------------------------------------
// Jump density

struct JumpDensityReport {
  Eigen::VectorXd weight_direct;   // h * symbol(nu) b, straight from the measure
  Eigen::VectorXd weight_pairing;  // symbol(nu) applied to the traced jump datum
  double patch_area = 0;
  Eigen::VectorXd mass_direct, mass_pairing;
  double rel_err = 0;
};

// For a field with a single pure-step term, the jump part of A u on B must be
// symbol(nu)[datum] * area, where the datum is recovered from the one-sided
// limits of grad^(k-1) u by tracing against nu^(k-1) with multinomial
// weights.  The two routes share no code, so agreement pins the bookkeeping.
inline JumpDensityReport verify_jump_density(const Operator& op, const SyntheticField& field,
                                             const Box& B) {
  validate_operator(op);
  validate_field(field);
  if (field.n != op.n || field.dimV != op.dimV)
    throw std::invalid_argument("verify_jump_density: operator/field dimension mismatch");
  validate_box(B, op.n);
  if (field.terms.size() != 1 || field.terms[0].profile.jumps.size() != 1 ||
      !field.terms[0].profile.ac.empty() || !field.terms[0].profile.cantor.empty())
    throw std::invalid_argument("verify_jump_density: field must be a single pure step");

  const FieldTerm& term = field.terms[0];
  const JumpAtom atom = term.profile.jumps[0];
  const int m = op.order - 1;

  JumpDensityReport report;
  const MeasureRep rep = apply_operator_analytic(op, field);
  report.weight_direct = atom.h * rep.components[0].weight;
  report.mass_direct = measure_on_box(rep, B, Part::jump);

  // one-sided tensor limits differ by h * coords(b (x) nu^m); trace back to V
  const Eigen::VectorXd diff = atom.h * tensor_coords(term.b, term.nu, m);
  const auto alphas = multiindex_enumerate(op.n, m);
  Eigen::VectorXd datum = Eigen::VectorXd::Zero(op.dimV);
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    const double weight =
        static_cast<double>(multinomial(alphas[a])) * monomial_eval<double>(term.nu, alphas[a]);
    for (int l = 0; l < op.dimV; ++l)
      datum[l] += weight * diff[static_cast<Eigen::Index>(a) * op.dimV + l];
  }
  report.weight_pairing = symbol_eval(op, term.nu) * datum;

  report.patch_area =
      box_patch_area(B, term.nu, atom.t, box_cross_section(B, term.nu));
  report.mass_pairing = report.weight_pairing * report.patch_area;

  const double scale = std::max(report.mass_direct.norm(), report.mass_pairing.norm());
  report.rel_err =
      scale < 1e-300 ? 0.0 : (report.mass_direct - report.mass_pairing).norm() / scale;
  return report;
}

// ---------------------------------------------------------------------------
// Hyperplane slicing through a slice operator (order one, n = 2)

struct HyperplaneSliceReport {
  Eigen::VectorXd lhs_ac, lhs_jump, lhs_cantor, lhs_total;
  Eigen::VectorXd rhs_ac, rhs_jump, rhs_cantor, rhs_total;
  double max_abs_err = 0;
  int stations = 0;
};

// Compares the projection of A u onto the escape space W_xe against the
// fibered integral over stations z on the xi-line of the slice operator
// applied to the hyperplane sections v_z(y) = p_e u(z xi + y H), part by
// part.  Limited to first order in the plane, where the hyperplane sections
// are single lines.
inline HyperplaneSliceReport verify_hyperplane_slicing(const Operator& op,
                                                       const SyntheticField& field,
                                                       const Eigen::VectorXd& xi,
                                                       const Eigen::VectorXd& e, const Box& B,
                                                       int stations, const Tolerances& tol = {}) {
  validate_operator(op);
  validate_field(field);
  if (op.order != 1 || op.n != 2)
    throw std::invalid_argument("verify_hyperplane_slicing: requires order 1 and n = 2");
  if (field.n != op.n || field.dimV != op.dimV)
    throw std::invalid_argument("verify_hyperplane_slicing: operator/field dimension mismatch");
  validate_box(B, op.n);
  if (stations < 1) throw std::invalid_argument("verify_hyperplane_slicing: need stations >= 1");

  const SliceOperator slice = build_slice(op, xi, e, tol);
  const Eigen::VectorXd xi_unit = slice.xi;
  const Eigen::VectorXd axis = slice.hyperplane.col(0);
  const int q = static_cast<int>(slice.target.cols());
  const int d = static_cast<int>(slice.domain.cols());
  const Eigen::MatrixXd C = slice.restricted.coeffs[0];  // q x d, the 1-D slice symbol

  HyperplaneSliceReport report;
  report.stations = stations;

  const MeasureRep rep = apply_operator_analytic(op, field);
  report.lhs_ac = slice.target.transpose() * measure_on_box(rep, B, Part::ac);
  report.lhs_jump = slice.target.transpose() * measure_on_box(rep, B, Part::jump);
  report.lhs_cantor = slice.target.transpose() * measure_on_box(rep, B, Part::cantor);
  report.lhs_total = report.lhs_ac + report.lhs_jump + report.lhs_cantor;

  report.rhs_ac = Eigen::VectorXd::Zero(q);
  report.rhs_jump = Eigen::VectorXd::Zero(q);
  report.rhs_cantor = Eigen::VectorXd::Zero(q);

  double zlo = std::numeric_limits<double>::infinity(), zhi = -zlo;
  for (unsigned mask = 0; mask < 4u; ++mask) {
    const double z = xi_unit.dot(box_corner(B, mask));
    zlo = std::min(zlo, z);
    zhi = std::max(zhi, z);
  }
  const double dz = (zhi - zlo) / stations;

  // per-component section weights: v_z coordinates are domain^T u
  std::vector<std::vector<double>> kappa(static_cast<std::size_t>(d));
  for (int r = 0; r < d; ++r)
    for (const FieldTerm& term : field.terms)
      kappa[static_cast<std::size_t>(r)].push_back(slice.domain.col(r).dot(term.b));

  for (int s = 0; s < stations; ++s) {
    const Eigen::VectorXd x0 = (zlo + (s + 0.5) * dz) * xi_unit;
    Interval clip;
    if (!line_box_clip(B, x0, axis, clip)) continue;
    Eigen::VectorXd d_ac(d), d_jump(d), d_cantor(d);
    for (int r = 0; r < d; ++r) {
      const BVProfile1D section =
          field_section_profile(field, kappa[static_cast<std::size_t>(r)], x0, axis);
      d_ac[r] = bv1d_measure(section, clip, Part::ac);
      d_jump[r] = bv1d_measure(section, clip, Part::jump);
      d_cantor[r] = bv1d_measure(section, clip, Part::cantor);
    }
    report.rhs_ac += dz * (C * d_ac);
    report.rhs_jump += dz * (C * d_jump);
    report.rhs_cantor += dz * (C * d_cantor);
  }
  report.rhs_total = report.rhs_ac + report.rhs_jump + report.rhs_cantor;

  report.max_abs_err = std::max(
      {(report.lhs_ac - report.rhs_ac).cwiseAbs().maxCoeff(),
       (report.lhs_jump - report.rhs_jump).cwiseAbs().maxCoeff(),
       (report.lhs_cantor - report.rhs_cantor).cwiseAbs().maxCoeff(),
       (report.lhs_total - report.rhs_total).cwiseAbs().maxCoeff()});
  return report;
}

}  // namespace symlab

#pragma once

// Slice machinery for first-order operators: given a spectral pair (xi, e),
// split off the controlled direction and produce the operator the pair leaves
// behind on the hyperplane pi_xi.
//
// Spaces, all computed in coordinates:
//   V_e   = e^perp in V (all of V when dimV = 1),
//   Y     = R^n(x)e + xi(x)V*   (span{xi(x)e} when dimV = 1),
//   X     = {w : B_w in Y},     W = X^perp,
// and the restricted operator B acting from V_e to W over pi_xi.

#include <symlab/classify.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace symlab {

struct SliceOperator {
  Operator parent;
  Eigen::VectorXd xi;  // unit direction
  Eigen::VectorXd e;   // unit coordinate covector
  Eigen::VectorXd witness;
  double fit_residual = 0;

  Subspace Ve;   // subspace of V
  Subspace Y;    // subspace of (R^n (x) V)*, flattened row-major (j*N + l)
  Subspace X;    // preimage of Y under w -> B_w
  Subspace Wxe;  // X^perp, the surviving target directions

  Eigen::MatrixXd proj_e;      // orthoprojector V -> V_e
  Eigen::MatrixXd proj_xe;     // orthoprojector W -> W_xi^e
  Eigen::MatrixXd hyperplane;  // n x (n-1), orthonormal basis of pi_xi
  Eigen::MatrixXd domain;      // N x dim V_e, orthonormal basis of V_e
  Eigen::MatrixXd target;      // M x dim W, orthonormal basis of W_xi^e

  Operator restricted;  // first order, n-1 variables, V_e -> W_xi^e
};

inline SliceOperator build_slice(const Operator& op, const Eigen::VectorXd& xi_in,
                                 const Eigen::VectorXd& e_in, const Tolerances& tol = {}) {
  validate_operator(op);
  if (op.order != 1) throw std::invalid_argument("build_slice: first-order operators only");
  if (op.n < 2) throw std::invalid_argument("build_slice: needs at least two variables");
  if (xi_in.size() != op.n || e_in.size() != op.dimV)
    throw std::invalid_argument("build_slice: pair has wrong dimensions");
  if (xi_in.norm() <= tol.rank_tol || e_in.norm() <= tol.rank_tol)
    throw std::invalid_argument("build_slice: trivial pair");

  SliceOperator s;
  s.parent = op;
  s.xi = xi_in.normalized();
  s.e = e_in.normalized();

  WitnessFit fit = witness_for_pair(op, s.xi, s.e);
  if (fit.residual > tol.residual_tol)
    throw std::invalid_argument("build_slice: (xi, e) does not validate as a spectral pair");
  s.witness = fit.witness;
  s.fit_residual = fit.residual;

  const int n = op.n, N = op.dimV, M = op.dimW;

  if (N == 1) {
    s.Ve = Subspace::full(1);
  } else {
    Eigen::MatrixXd eb = s.e;
    s.Ve = subspace_orthocomplement(subspace_span(eb, tol.rank_tol));
  }
  s.domain = s.Ve.basis;
  s.proj_e = s.Ve.projector();

  Eigen::MatrixXd gens;
  if (N == 1) {
    gens = s.xi * s.e(0);
  } else {
    gens = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n) * N, n + N);
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < N; ++l) gens(static_cast<Eigen::Index>(i) * N + l, i) = s.e(l);
    for (int l = 0; l < N; ++l)
      for (int j = 0; j < n; ++j) gens(static_cast<Eigen::Index>(j) * N + l, n + l) = s.xi(j);
  }
  s.Y = subspace_span(gens, tol.rank_tol);

  // g_A columnwise, then X = kernel of the part of g_A that escapes Y
  Eigen::MatrixXd G(static_cast<Eigen::Index>(n) * N, M);
  for (int m = 0; m < M; ++m) {
    Eigen::MatrixXd b = first_order_witness_matrix(op, Eigen::VectorXd::Unit(M, m));
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < N; ++l) G(static_cast<Eigen::Index>(j) * N + l, m) = b(j, l);
  }
  Eigen::MatrixXd escape = G - s.Y.basis * (s.Y.basis.transpose() * G);
  s.Wxe = subspace_span(escape.transpose(), tol.rank_tol);
  s.X = subspace_orthocomplement(s.Wxe);
  s.target = s.Wxe.basis;
  s.proj_xe = s.Wxe.projector();
  if (s.Wxe.dim() == 0)
    throw std::runtime_error("build_slice: target space collapsed; no direction survives the pair");

  s.hyperplane = hyperplane_basis(s.xi);
  s.restricted = make_operator(n - 1, s.Ve.dim(), s.Wxe.dim(), 1,
                               op.name.empty() ? std::string{} : op.name + "_slice");
  for (int i = 0; i < n - 1; ++i)
    s.restricted.coeffs[static_cast<std::size_t>(i)] =
        s.target.transpose() * symbol_eval(op, s.hyperplane.col(i).eval()) * s.domain;
  validate_operator(s.restricted);
  return s;
}

inline SliceOperator build_slice(const Operator& op, const SpectralPair& pair,
                                 const Tolerances& tol = {}) {
  return build_slice(op, pair.xi, pair.coordinate, tol);
}

// ---------------------------------------------------------------------------
// Property checks

struct SlicePropertyReport {
  SliceOperator slice;

  double vanish_residual = 0;       // images of (R^n, e) and (xi, V) die under proj_xe
  double restriction_residual = 0;  // images of pi_xi x V_e are already inside W_xi^e
  double invariance_residual = 0;   // restricted symbol ignores the xi-component

  EllipticityResult parent_real, parent_complex;
  EllipticityResult slice_real, slice_complex;
  bool real_transfer_ok = true;
  bool complex_transfer_ok = true;

  MixingResult parent_mixing;
  MixingResult slice_mixing;
  bool slice_mixing_applicable = false;

  double containment_residual = 0;  // worst mapped-back slice pair
  int mapped_pairs = 0;

  bool ok = false;
};

inline SlicePropertyReport check_slice_properties(const Operator& op, const Eigen::VectorXd& xi,
                                                  const Eigen::VectorXd& e,
                                                  const Budget& budget = {},
                                                  const Tolerances& tol = {},
                                                  std::uint64_t seed = 0) {
  SlicePropertyReport rep;
  rep.slice = build_slice(op, xi, e, tol);
  const SliceOperator& s = rep.slice;
  const int n = op.n;
  const double scale = std::max(op.coeff_norm(), 1e-300);

  double worst = 0;
  if (op.dimV >= 2)
    for (int i = 0; i < n; ++i)
      worst = std::max(
          worst,
          (s.target.transpose() * symbol_eval(op, Eigen::VectorXd::Unit(n, i).eval()) * s.e)
              .norm());
  worst = std::max(worst, (s.target.transpose() * symbol_eval(op, s.xi)).norm());
  rep.vanish_residual = worst / scale;

  std::mt19937_64 rng(seed ^ 0xd1b54a32d192ed03ULL);
  double rest = 0, invar = 0;
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd eta = s.hyperplane * random_unit_vector(n - 1, rng);
    Eigen::VectorXd v = s.domain * random_unit_vector(s.Ve.dim(), rng);
    Eigen::VectorXd img = symbol_eval(op, eta) * v;
    rest = std::max(rest, (img - s.proj_xe * img).norm());

    Eigen::VectorXd full = random_unit_vector(n, rng);
    Eigen::VectorXd tang = full - s.xi * s.xi.dot(full);
    invar = std::max(invar, (s.target.transpose() *
                             (symbol_eval(op, full) - symbol_eval(op, tang)) * s.domain)
                                .norm());
  }
  rep.restriction_residual = rest / scale;
  rep.invariance_residual = invar / scale;

  rep.parent_real = ellipticity_constant(op, budget, tol);
  rep.parent_complex = complex_ellipticity_constant(op, budget, tol);
  rep.slice_real = ellipticity_constant(s.restricted, budget, tol);
  rep.slice_complex = complex_ellipticity_constant(s.restricted, budget, tol);
  rep.real_transfer_ok =
      rep.parent_real.verdict != Verdict::Yes || rep.slice_real.verdict == Verdict::Yes;
  rep.complex_transfer_ok =
      rep.parent_complex.verdict != Verdict::Yes || rep.slice_complex.verdict == Verdict::Yes;

  rep.parent_mixing = mixing_check(op, budget, tol, seed);
  std::vector<SpectralPair> sub_pairs;
  if (rep.parent_mixing.verdict == SearchVerdict::Verified) {
    rep.slice_mixing_applicable = true;
    rep.slice_mixing = mixing_check(s.restricted, budget, tol, seed + 1);
    sub_pairs = rep.slice_mixing.pairs;
  } else {
    sub_pairs = rank_one_cone_search(s.restricted, budget, tol, seed + 1).pairs;
  }

  double cont = 0;
  for (const auto& p : sub_pairs) {
    Eigen::VectorXd back_xi = s.hyperplane * p.xi;
    Eigen::VectorXd back_f = s.domain * p.coordinate;
    Eigen::VectorXd back_w = s.target * p.witness;
    cont = std::max(cont, pair_residual(op, back_w, back_xi, back_f, 32, seed + 2));
  }
  rep.containment_residual = cont;
  rep.mapped_pairs = static_cast<int>(sub_pairs.size());

  rep.ok = rep.vanish_residual <= 1e-10 && rep.restriction_residual <= 1e-10 &&
           rep.invariance_residual <= 1e-10 && rep.real_transfer_ok &&
           rep.complex_transfer_ok && rep.containment_residual <= tol.residual_tol &&
           (!rep.slice_mixing_applicable ||
            rep.slice_mixing.verdict == SearchVerdict::Verified);
  return rep;
}

inline SlicePropertyReport check_slice_properties(const Operator& op, const SpectralPair& pair,
                                                  const Budget& budget = {},
                                                  const Tolerances& tol = {},
                                                  std::uint64_t seed = 0) {
  return check_slice_properties(op, pair.xi, pair.coordinate, budget, tol, seed);
}

// ---------------------------------------------------------------------------
// Transversal pairs and polarization

// Search the slice of (xi, e) for a pair and map it back: the result is a
// spectral pair (eta, f) of the parent with eta in pi_xi and f in (V_e)*.
inline SpectralPair find_transversal_pair(const Operator& op, const Eigen::VectorXd& xi,
                                          const Eigen::VectorXd& e, const Budget& budget = {},
                                          const Tolerances& tol = {}, std::uint64_t seed = 0) {
  SliceOperator s = build_slice(op, xi, e, tol);
  RankOneSearchResult sub = rank_one_cone_search(s.restricted, budget, tol, seed);
  SpectralPair best;
  double best_res = std::numeric_limits<double>::infinity();
  for (const auto& p : sub.pairs) {
    SpectralPair mapped;
    mapped.xi = s.hyperplane * p.xi;
    mapped.coordinate = s.domain * p.coordinate;
    mapped.witness = s.target * p.witness;
    mapped.residual = pair_residual(op, mapped.witness, mapped.xi, mapped.coordinate, 32, seed);
    if (mapped.residual < best_res) {
      best_res = mapped.residual;
      best = mapped;
    }
  }
  if (!std::isfinite(best_res) || best_res > tol.residual_tol)
    throw std::runtime_error(
        "find_transversal_pair: slice search exhausted its budget; "
        "anomalous for an elliptic operator with verified spanning covectors");
  return best;
}

inline SpectralPair find_transversal_pair(const Operator& op, const SpectralPair& pair,
                                          const Budget& budget = {}, const Tolerances& tol = {},
                                          std::uint64_t seed = 0) {
  return find_transversal_pair(op, pair.xi, pair.coordinate, budget, tol, seed);
}

struct PolarizationResult {
  double t = 0;
  Eigen::VectorXd v;  // t * f
  Eigen::VectorXd witness_plus, witness_minus;
  double residual_plus = 0, residual_minus = 0;
};

// Given pairs (xi, e) and (eta, f) with eta orthogonal to xi and f in (V_e)*,
// find a scalar t so that (xi+eta, e+t f) and (xi-eta, e-t f) are both pairs.
// Scan |t| ascending over a log grid (positive sign first), so the smallest
// acceptable magnitude wins; fall back to a 1-D compass descent in log|t|.
inline PolarizationResult polarize(const Operator& op, const Eigen::VectorXd& xi,
                                   const Eigen::VectorXd& e, const Eigen::VectorXd& eta,
                                   const Eigen::VectorXd& f, const Tolerances& tol = {}) {
  validate_operator(op);
  if (op.order != 1) throw std::invalid_argument("polarize: first-order operators only");
  if (xi.size() != op.n || eta.size() != op.n || e.size() != op.dimV || f.size() != op.dimV)
    throw std::invalid_argument("polarize: dimension mismatch");
  if (xi.norm() == 0 || eta.norm() == 0 || e.norm() == 0 || f.norm() == 0)
    throw std::invalid_argument("polarize: trivial input");
  Eigen::VectorXd xu = xi.normalized(), yu = eta.normalized();
  if (std::abs(xu.dot(yu)) > 1e-10)
    throw std::invalid_argument("polarize: directions must be orthogonal");
  if (op.dimV >= 2 && std::abs(e.normalized().dot(f.normalized())) > 1e-10)
    throw std::invalid_argument("polarize: f must lie in (V_e)*");
  if (witness_for_pair(op, xu, e.normalized()).residual > tol.residual_tol ||
      witness_for_pair(op, yu, f.normalized()).residual > tol.residual_tol)
    throw std::invalid_argument("polarize: an input pair does not validate");

  auto fit_both = [&](double t, PolarizationResult* out) {
    WitnessFit plus = witness_for_pair(op, (xu + yu).eval(), (e + t * f).eval());
    WitnessFit minus = witness_for_pair(op, (xu - yu).eval(), (e - t * f).eval());
    if (out) {
      out->t = t;
      out->v = t * f;
      out->witness_plus = plus.witness;
      out->witness_minus = minus.witness;
      out->residual_plus = plus.residual;
      out->residual_minus = minus.residual;
    }
    return std::max(plus.residual, minus.residual);
  };

  double best_t = 1, best_r = std::numeric_limits<double>::infinity();
  for (int j = -6; j <= 6; ++j) {
    for (double sign : {1.0, -1.0}) {
      const double t = sign * std::pow(10.0, j);
      const double r = fit_both(t, nullptr);
      if (r <= tol.residual_tol) {
        PolarizationResult res;
        fit_both(t, &res);
        return res;
      }
      if (r < best_r) {
        best_r = r;
        best_t = t;
      }
    }
  }

  // compass descent on u = log10|t|, trying the better sign first
  for (double sign : {best_t > 0 ? 1.0 : -1.0, best_t > 0 ? -1.0 : 1.0}) {
    double u = std::log10(std::abs(best_t));
    double val = fit_both(sign * std::pow(10.0, u), nullptr);
    for (double step = 0.5; step > 1e-12;) {
      bool moved = false;
      for (double cand : {u + step, u - step}) {
        const double r = fit_both(sign * std::pow(10.0, cand), nullptr);
        if (r < val) {
          val = r;
          u = cand;
          moved = true;
          break;
        }
      }
      if (!moved) step *= 0.5;
    }
    const double t = sign * std::pow(10.0, u);
    if (fit_both(t, nullptr) <= tol.residual_tol) {
      PolarizationResult res;
      fit_both(t, &res);
      return res;
    }
  }
  throw std::runtime_error(
      "polarize: no admissible scalar found; "
      "anomalous for an elliptic operator with verified spanning covectors");
}

}  // namespace symlab

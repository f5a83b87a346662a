#pragma once

// Structural classification of homogeneous operators: ellipticity over R and
// C, the canceling condition, directional spectra and the mixing property.
//
// Search-based verdicts are semi-decisions: "Verified" always comes with a
// constructive certificate (pairs, witnesses, subspace bases), a negative only
// states that the budget was exhausted.

#include <symlab/multi_index.hpp>
#include <symlab/operator.hpp>
#include <symlab/sphere.hpp>
#include <symlab/subspace.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace symlab {

enum class Verdict { Yes, No, Inconclusive };
enum class SearchVerdict { Verified, NotFoundWithinBudget };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "Yes";
    case Verdict::No: return "No";
    default: return "Inconclusive";
  }
}
inline const char* to_string(SearchVerdict v) {
  return v == SearchVerdict::Verified ? "Verified" : "NotFoundWithinBudget";
}

struct Budget {
  int sphere_samples = 0;      // 0 = auto (4096 for n <= 3, 32768 above)
  int random_directions = 128; // direction schedule length
  int restarts = 200;          // sigma_2 minimization restarts (first order)
  int refine_starts = 10;      // sphere minimization polish starts
};

struct Tolerances {
  double rank_tol = 1e-9;      // relative singular value cutoff
  double residual_tol = 1e-8;  // spectral pair acceptance
};

inline int auto_sphere_samples(int ambient, const Budget& b) {
  if (b.sphere_samples > 0) return b.sphere_samples;
  return ambient <= 3 ? 4096 : 32768;
}

// ---------------------------------------------------------------------------
// Ellipticity

struct EllipticityResult {
  Verdict verdict = Verdict::Inconclusive;
  double constant = 0;   // min of sigma_min(A(xi)) over the (real) unit sphere
  double scale = 0;      // max of sigma_max(A(xi)); reference for thresholds
  Eigen::VectorXcd xi;   // argmin (imaginary part zero in the real case)
  Eigen::VectorXcd null_direction;  // near-kernel direction when verdict is No
  int samples = 0;
};

namespace detail {

template <typename Scalar>
EllipticityResult minimize_sigma_min(const Operator& op, int ambient, const Budget& budget,
                                     const Tolerances& tol) {
  constexpr bool complex_mode = !std::is_same_v<Scalar, double>;
  auto lift = [&](const Eigen::VectorXd& p) -> Eigen::Matrix<Scalar, Eigen::Dynamic, 1> {
    if constexpr (complex_mode) {
      Eigen::VectorXcd xi(op.n);
      for (int i = 0; i < op.n; ++i) xi[i] = std::complex<double>(p[i], p[op.n + i]);
      return xi;
    } else {
      return p;
    }
  };
  auto objective = [&](const Eigen::VectorXd& p) {
    return smallest_singular_value(symbol_eval<Scalar>(op, lift(p)));
  };

  EllipticityResult res;
  const int count = auto_sphere_samples(ambient, budget);
  std::vector<Eigen::VectorXd> pts = canonical_directions(ambient);
  {
    auto ld = low_discrepancy_sphere(ambient, count);
    pts.insert(pts.end(), ld.begin(), ld.end());
  }
  res.samples = static_cast<int>(pts.size());

  std::vector<std::pair<double, Eigen::VectorXd>> scored;
  scored.reserve(pts.size());
  double scale = 0;
  for (const auto& p : pts) {
    Eigen::JacobiSVD<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(
        symbol_eval<Scalar>(op, lift(p)));
    const auto& sv = svd.singularValues();
    scale = std::max(scale, sv.size() ? sv[0] : 0.0);
    scored.emplace_back(sv.size() ? sv[sv.size() - 1] : 0.0, p);
  }
  std::sort(scored.begin(), scored.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  Eigen::VectorXd best_p = scored.front().second;
  double best_v = scored.front().first;
  const int starts = std::min<int>(budget.refine_starts, static_cast<int>(scored.size()));
  for (int s = 0; s < starts; ++s) {
    auto r = compass_minimize_sphere(objective, scored[static_cast<std::size_t>(s)].second, 0.3);
    if (r.value < best_v) {
      best_v = r.value;
      best_p = r.point;
    }
  }

  res.constant = best_v;
  res.scale = scale;
  auto xi = lift(best_p);
  res.xi = xi.template cast<std::complex<double>>();
  const double yes_threshold = 10 * tol.rank_tol * std::max(scale, 1e-300);
  const double no_threshold = tol.rank_tol * std::max(scale, 1e-300);
  if (best_v > yes_threshold) {
    res.verdict = Verdict::Yes;
  } else if (best_v < no_threshold) {
    res.verdict = Verdict::No;
    Eigen::JacobiSVD<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(
        symbol_eval<Scalar>(op, xi), Eigen::ComputeFullV);
    res.null_direction =
        svd.matrixV().col(op.dimV - 1).template cast<std::complex<double>>();
  } else {
    res.verdict = Verdict::Inconclusive;
  }
  return res;
}

}  // namespace detail

// min over the real unit sphere of the smallest singular value of the symbol.
inline EllipticityResult ellipticity_constant(const Operator& op, const Budget& budget = {},
                                              const Tolerances& tol = {}) {
  validate_operator(op);
  return detail::minimize_sigma_min<double>(op, op.n, budget, tol);
}

// Same minimization over the complex sphere, parametrized by S^{2n-1}.
inline EllipticityResult complex_ellipticity_constant(const Operator& op,
                                                      const Budget& budget = {},
                                                      const Tolerances& tol = {}) {
  validate_operator(op);
  return detail::minimize_sigma_min<std::complex<double>>(op, 2 * op.n, budget, tol);
}

// ---------------------------------------------------------------------------
// Image intersections

struct CancelingResult {
  Verdict verdict = Verdict::Inconclusive;
  Subspace common;  // intersection of symbol images over sampled directions
  int directions_used = 0;
};

// Intersection of im A(xi) over unit directions until 50 stable steps.
inline CancelingResult is_canceling(const Operator& op, const Budget& budget = {},
                                    const Tolerances& tol = {}, std::uint64_t seed = 0) {
  validate_operator(op);
  const int want = std::max(budget.random_directions, 64);
  auto dirs = direction_schedule(op.n, want, seed);
  CancelingResult res;
  res.common = Subspace::full(op.dimW);
  int stable = 0;
  for (const auto& xi : dirs) {
    ++res.directions_used;
    Subspace img = subspace_span(symbol_eval(op, xi), tol.rank_tol);
    Subspace next = subspace_intersect(res.common, img, tol.rank_tol);
    if (next.dim() == res.common.dim()) {
      ++stable;
    } else {
      stable = 0;
    }
    res.common = next;
    if (res.common.dim() == 0 || stable >= 50) break;
  }
  if (res.common.dim() == 0) {
    res.verdict = Verdict::Yes;
  } else if (stable >= 50) {
    res.verdict = Verdict::No;
  } else {
    res.verdict = Verdict::Inconclusive;
  }
  return res;
}

// Essential range W_A: span of symbol images over directions, 50-stable.
inline Subspace essential_range(const Operator& op, const Budget& budget = {},
                                const Tolerances& tol = {}, std::uint64_t seed = 0) {
  validate_operator(op);
  const int want = std::max(budget.random_directions, 64);
  auto dirs = direction_schedule(op.n, want, seed);
  Subspace acc = Subspace::zero(op.dimW);
  int stable = 0;
  for (const auto& xi : dirs) {
    Subspace next = subspace_sum(acc, subspace_span(symbol_eval(op, xi), tol.rank_tol), tol.rank_tol);
    if (next.dim() == acc.dim()) ++stable; else stable = 0;
    acc = next;
    if (acc.dim() == op.dimW || stable >= 50) break;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Directional spectrum

// Covector pair: <w, A^k(eta) v> = <xi, eta> <E, v (x)^{k-1} eta> for all eta, v.
struct SpectralPair {
  Eigen::VectorXd xi;          // direction, unit
  Eigen::VectorXd coordinate;  // E in V (x) E_{k-1} coordinates (e for k = 1)
  Eigen::VectorXd witness;     // w in W*, unit
  double residual = 0;         // validated relative residual
};

// g_A(w) for first order: the n x N matrix (B_w)_{j,l} = w^T A_{e_j} e_l.
inline Eigen::MatrixXd first_order_witness_matrix(const Operator& op, const Eigen::VectorXd& w) {
  if (op.order != 1) throw std::invalid_argument("first_order_witness_matrix: needs order 1");
  if (w.size() != op.dimW) throw std::invalid_argument("witness has wrong dimension");
  Eigen::MatrixXd b(op.n, op.dimV);
  for (std::size_t i = 0; i < op.alphas.size(); ++i) {
    int j = 0;
    while (op.alphas[i][static_cast<std::size_t>(j)] == 0) ++j;
    b.row(j) = (op.coeffs[i].transpose() * w).transpose();
  }
  return b;
}

struct RankOneInfo {
  int rank = 0;
  Eigen::MatrixXd matrix;  // B_w
};

inline RankOneInfo rank_A_first_order(const Operator& op, const Eigen::VectorXd& w,
                                      const Tolerances& tol = {}) {
  RankOneInfo info;
  info.matrix = first_order_witness_matrix(op, w);
  info.rank = numeric_rank(info.matrix, tol.rank_tol);
  return info;
}

// Orthonormal basis of the hyperplane orthogonal to xi, deterministic via the
// Householder reflection sending e_1 to xi/|xi|.
inline Eigen::MatrixXd hyperplane_basis(const Eigen::VectorXd& xi) {
  const int n = static_cast<int>(xi.size());
  if (xi.norm() == 0) throw std::invalid_argument("hyperplane_basis: xi = 0");
  Eigen::VectorXd u = xi.normalized();
  if (n == 1) return Eigen::MatrixXd::Zero(1, 0);
  Eigen::VectorXd v = u;
  v[0] += (u[0] >= 0 ? 1.0 : -1.0);
  v.normalize();
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n) - 2.0 * v * v.transpose();
  // h maps -sign(u_0) e_1 to u; columns 2..n span the hyperplane either way.
  return h.rightCols(n - 1);
}

struct HyperplaneNullspace {
  Subspace nullspace;     // N(xi) in W*
  Subspace image_span;    // span{A^k(eta) v : eta in pi_xi, v in V}
};

// N(xi): annihilator of all symbol images over the hyperplane pi_xi.  For
// k >= 2 the hyperplane must be probed through dim E_k(pi_xi) independent
// pure powers, not just a basis of pi_xi.
inline HyperplaneNullspace hyperplane_nullspace(const Operator& op, const Eigen::VectorXd& xi,
                                                const Tolerances& tol = {},
                                                std::uint64_t seed = 0) {
  validate_operator(op);
  if (xi.size() != op.n) throw std::invalid_argument("hyperplane_nullspace: xi dimension");
  HyperplaneNullspace out;
  if (op.n == 1) {
    out.image_span = Subspace::zero(op.dimW);
    out.nullspace = Subspace::full(op.dimW);
    return out;
  }
  const Eigen::MatrixXd h = hyperplane_basis(xi);
  const int m = op.n - 1;
  const int need = multiindex_count(m, op.order);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<Eigen::VectorXd> etas;
  for (int attempt = 0; attempt < 5 && static_cast<int>(etas.size()) < need; ++attempt) {
    etas.clear();
    std::vector<Eigen::VectorXd> local = canonical_directions(m);
    while (static_cast<int>(local.size()) < need) local.push_back(random_unit_vector(m, rng));
    // greedily keep directions whose pure powers are independent
    Eigen::MatrixXd powers(multiindex_count(m, op.order), 0);
    for (const auto& y : local) {
      if (static_cast<int>(etas.size()) == need) break;
      Eigen::VectorXd cand = pure_power_coords<double>(y, op.order);
      Eigen::MatrixXd trial(powers.rows(), powers.cols() + 1);
      trial << powers, cand;
      if (numeric_rank(trial, tol.rank_tol) == static_cast<int>(trial.cols())) {
        powers = trial;
        etas.push_back(y);
      }
    }
  }
  if (static_cast<int>(etas.size()) < need)
    throw std::runtime_error("hyperplane_nullspace: could not span E_k of the hyperplane");
  Eigen::MatrixXd images(op.dimW, static_cast<Eigen::Index>(etas.size()) * op.dimV);
  for (std::size_t s = 0; s < etas.size(); ++s)
    images.middleCols(static_cast<Eigen::Index>(s) * op.dimV, op.dimV) =
        symbol_eval(op, (h * etas[s]).eval());
  out.image_span = subspace_span(images, tol.rank_tol);
  out.nullspace = subspace_orthocomplement(out.image_span);
  return out;
}

struct ExtractResult {
  bool ok = false;
  bool trivial = false;        // E = 0 (witness annihilates the whole range)
  Eigen::VectorXd coordinate;  // E
  double residual = 0;
};

// Solve <w, A^k(.) .> = <xi, .><E, .> for E.  The functional identity is
// equivalent to the coefficient system
//   w^T A_alpha e_l = sum_j xi_j E_{alpha - e_j, l},
// which is solved in least squares; the result is then validated on fresh
// sampled (eta, v) pairs so the reported residual is independent of the
// solving route.
inline ExtractResult extract_spectral_pair(const Operator& op, const Eigen::VectorXd& w,
                                           const Eigen::VectorXd& xi, const Tolerances& tol = {},
                                           std::uint64_t seed = 0) {
  validate_operator(op);
  if (w.size() != op.dimW || xi.size() != op.n)
    throw std::invalid_argument("extract_spectral_pair: dimension mismatch");
  const int N = op.dimV;
  auto betas = multiindex_enumerate(op.n, op.order - 1);
  const int ncoef = static_cast<int>(betas.size()) * N;
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(op.alphas.size()) * N, ncoef);
  Eigen::VectorXd rhs(G.rows());
  for (std::size_t a = 0; a < op.alphas.size(); ++a) {
    rhs.segment(static_cast<Eigen::Index>(a) * N, N) = op.coeffs[a].transpose() * w;
    MultiIndex alpha = op.alphas[a];
    for (int j = 0; j < op.n; ++j) {
      if (alpha[static_cast<std::size_t>(j)] == 0) continue;
      alpha[static_cast<std::size_t>(j)] -= 1;
      const int b = multiindex_position(betas, alpha);
      alpha[static_cast<std::size_t>(j)] += 1;
      for (int l = 0; l < N; ++l)
        G(static_cast<Eigen::Index>(a) * N + l, static_cast<Eigen::Index>(b) * N + l) += xi[j];
    }
  }
  ExtractResult res;
  res.coordinate = G.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);

  // fresh-sample validation of the functional identity
  std::mt19937_64 rng(seed ^ 0x2545f4914f6cdd1dULL);
  const double scale = std::max(w.norm() * op.coeff_norm(), 1e-300);
  double worst = 0;
  for (int s = 0; s < 32; ++s) {
    Eigen::VectorXd eta = random_unit_vector(op.n, rng);
    Eigen::VectorXd v = random_unit_vector(N, rng);
    const double lhs = w.dot(symbol_eval(op, eta) * v);
    const double rhsv =
        xi.dot(eta) * res.coordinate.dot(tensor_coords(v, eta, op.order - 1));
    worst = std::max(worst, std::abs(lhs - rhsv));
  }
  res.residual = worst / scale;
  res.ok = res.residual <= tol.residual_tol;
  res.trivial = res.coordinate.norm() <= 1e3 * tol.rank_tol * std::max(w.norm(), 1e-300) *
                                             std::max(op.coeff_norm(), 1.0);
  return res;
}

// Least-squares witness for a prescribed pair (xi, E); the relative residual
// is >= the distance of the pair from the spectrum, so a floor on it rules
// the pair out.
struct WitnessFit {
  Eigen::VectorXd witness;
  double residual = 0;
};

inline WitnessFit witness_for_pair(const Operator& op, const Eigen::VectorXd& xi,
                                   const Eigen::VectorXd& coordinate) {
  validate_operator(op);
  const int N = op.dimV;
  auto betas = multiindex_enumerate(op.n, op.order - 1);
  if (coordinate.size() != static_cast<Eigen::Index>(betas.size()) * N)
    throw std::invalid_argument("witness_for_pair: coordinate size");
  Eigen::MatrixXd G(static_cast<Eigen::Index>(op.alphas.size()) * N, op.dimW);
  Eigen::VectorXd rhs(G.rows());
  for (std::size_t a = 0; a < op.alphas.size(); ++a) {
    G.middleRows(static_cast<Eigen::Index>(a) * N, N) = op.coeffs[a].transpose();
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(N);
    MultiIndex alpha = op.alphas[a];
    for (int j = 0; j < op.n; ++j) {
      if (alpha[static_cast<std::size_t>(j)] == 0) continue;
      alpha[static_cast<std::size_t>(j)] -= 1;
      const int b = multiindex_position(betas, alpha);
      alpha[static_cast<std::size_t>(j)] += 1;
      acc += xi[j] * coordinate.segment(static_cast<Eigen::Index>(b) * N, N);
    }
    rhs.segment(static_cast<Eigen::Index>(a) * N, N) = acc;
  }
  WitnessFit fit;
  fit.witness = G.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(rhs);
  const double scale = std::max(rhs.norm(), 1e-300);
  fit.residual = (G * fit.witness - rhs).norm() / scale;
  return fit;
}

// Relative residual of the defining identity for a fully prescribed triple
// (w, xi, E), sampled on fresh (eta, v).  Unlike extract/fit, nothing is
// solved for, so this validates triples produced elsewhere (mapped back from
// a slice, projected from a linearization).
inline double pair_residual(const Operator& op, const Eigen::VectorXd& w,
                            const Eigen::VectorXd& xi, const Eigen::VectorXd& coordinate,
                            int samples = 32, std::uint64_t seed = 0) {
  validate_operator(op);
  if (w.size() != op.dimW || xi.size() != op.n)
    throw std::invalid_argument("pair_residual: dimension mismatch");
  std::mt19937_64 rng(seed ^ 0x6a09e667f3bcc909ULL);
  const double scale =
      std::max({w.norm() * op.coeff_norm(), xi.norm() * coordinate.norm(), 1e-300});
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd eta = random_unit_vector(op.n, rng);
    Eigen::VectorXd v = random_unit_vector(op.dimV, rng);
    const double lhs = w.dot(symbol_eval(op, eta) * v);
    const double rhs =
        xi.dot(eta) * coordinate.dot(tensor_coords(v, eta, op.order - 1));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst / scale;
}

// ---------------------------------------------------------------------------
// Rank-one cone search and the mixing property

struct RankOneSearchResult {
  std::vector<SpectralPair> pairs;
  Subspace witness_span;       // span of validated witnesses
  Subspace all_nullspace_span; // span of every N(xi) sampled (De Morgan check)
  Subspace dual_intersection;  // intersection of hyperplane image spans
  int directions_used = 0;
  bool demorgan_consistent = true;
};

inline RankOneSearchResult rank_one_cone_search(const Operator& op, const Budget& budget = {},
                                                const Tolerances& tol = {},
                                                std::uint64_t seed = 0) {
  validate_operator(op);
  const int M = op.dimW;
  RankOneSearchResult res;
  res.witness_span = Subspace::zero(M);
  res.all_nullspace_span = Subspace::zero(M);
  res.dual_intersection = Subspace::full(M);

  auto consider_witness = [&](const Eigen::VectorXd& w, const Eigen::VectorXd& xi) {
    ExtractResult ex = extract_spectral_pair(op, w, xi, tol, seed);
    if (!ex.ok) return;
    if (res.witness_span.contains(w, 1e-7)) return;
    res.witness_span = subspace_sum(res.witness_span, subspace_span(w, tol.rank_tol), tol.rank_tol);
    if (!ex.trivial) {
      SpectralPair p;
      p.xi = xi.normalized();
      p.coordinate = ex.coordinate;
      p.witness = w.normalized();
      p.residual = ex.residual;
      res.pairs.push_back(std::move(p));
    }
  };

  auto dirs = direction_schedule(op.n, std::max(budget.random_directions, 32), seed);
  for (const auto& xi : dirs) {
    ++res.directions_used;
    HyperplaneNullspace hn = hyperplane_nullspace(op, xi, tol, seed + res.directions_used);
    res.all_nullspace_span =
        subspace_sum(res.all_nullspace_span, hn.nullspace, tol.rank_tol);
    res.dual_intersection = subspace_intersect(res.dual_intersection, hn.image_span, tol.rank_tol);
    for (int c = 0; c < hn.nullspace.dim(); ++c) consider_witness(hn.nullspace.basis.col(c), xi);
    if (res.witness_span.dim() == M) break;
  }

  // second-singular-value polish, first order only
  if (op.order == 1 && res.witness_span.dim() < M && std::min(op.n, op.dimV) >= 2) {
    auto sigma2 = [&](const Eigen::VectorXd& w) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(first_order_witness_matrix(op, w));
      return svd.singularValues()[1];
    };
    std::mt19937_64 rng(seed ^ 0xda3e39cb94b95bdbULL);
    for (int r = 0; r < budget.restarts && res.witness_span.dim() < M; ++r) {
      auto min_res = compass_minimize_sphere(sigma2, random_unit_vector(M, rng), 0.4, 300);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(first_order_witness_matrix(op, min_res.point),
                                            Eigen::ComputeFullU);
      const auto& sv = svd.singularValues();
      if (sv[1] > 1e-8 * std::max(1.0, sv[0])) continue;
      if (sv[0] <= tol.rank_tol) continue;  // rank-zero covector, no direction
      consider_witness(min_res.point, svd.matrixU().col(0));
    }
  }

  res.demorgan_consistent =
      res.dual_intersection.dim() + res.all_nullspace_span.dim() == M;
  return res;
}

struct MixingResult {
  SearchVerdict verdict = SearchVerdict::NotFoundWithinBudget;
  std::vector<SpectralPair> pairs;
  int witness_span_dim = 0;      // span of rank <= 1 covectors found
  int essential_range_dim = 0;   // dim W_A
  bool demorgan_consistent = true;
};

// Mixing: rank <= 1 covectors together with the annihilator of W_A must span
// all of W*.  Works for any order via the hyperplane construction.
inline MixingResult mixing_check(const Operator& op, const Budget& budget = {},
                                 const Tolerances& tol = {}, std::uint64_t seed = 0) {
  MixingResult out;
  Subspace wa = essential_range(op, budget, tol, seed);
  out.essential_range_dim = wa.dim();
  RankOneSearchResult search = rank_one_cone_search(op, budget, tol, seed);
  out.pairs = search.pairs;
  out.demorgan_consistent = search.demorgan_consistent;
  Subspace total = subspace_sum(search.witness_span, subspace_orthocomplement(wa), tol.rank_tol);
  out.witness_span_dim = search.witness_span.dim();
  out.verdict = total.dim() == op.dimW ? SearchVerdict::Verified
                                       : SearchVerdict::NotFoundWithinBudget;
  return out;
}

// ---------------------------------------------------------------------------
// Scalar reduction (first order, N = 1)

struct ScalarReduction {
  Eigen::MatrixXd R;             // selected n x n row system
  std::vector<int> rows;         // indices of selected rows
  double c_lower = 1.0;          // |A_R(xi)| <= c_lower^{-1} |A(xi)|, i.e. 1
  double c_upper = 1.0;          // |A(xi)| <= c_upper |A_R(xi)|
  bool verified = false;         // sampled two-sided domination held
};

struct NotEllipticError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rewrites an elliptic scalar first-order operator through n independent rows:
// A(xi) stacks the linear forms eta_j . xi; the selected rows give R with
// |A_R(xi)| <= |A(xi)| <= c |A_R(xi)|.
inline ScalarReduction reduce_scalar_operator(const Operator& op, const Tolerances& tol = {},
                                              std::uint64_t seed = 0) {
  validate_operator(op);
  if (op.order != 1 || op.dimV != 1)
    throw std::invalid_argument("reduce_scalar_operator: needs a scalar first-order operator");
  Eigen::MatrixXd rows(op.dimW, op.n);
  for (std::size_t i = 0; i < op.alphas.size(); ++i) {
    int j = 0;
    while (op.alphas[i][static_cast<std::size_t>(j)] == 0) ++j;
    rows.col(j) = op.coeffs[i].col(0);
  }
  if (numeric_rank(rows, tol.rank_tol) < op.n)
    throw NotEllipticError("reduce_scalar_operator: row system has rank < n, operator not elliptic");

  // greedy in row order: keep a row if it adds a direction (guarded by the
  // orthogonal residual so near-dependent prefixes are skipped)
  ScalarReduction red;
  Eigen::MatrixXd sel(op.n, 0);
  for (int r = 0; r < op.dimW && static_cast<int>(red.rows.size()) < op.n; ++r) {
    Eigen::VectorXd cand = rows.row(r).transpose();
    Eigen::VectorXd resid = cand;
    if (sel.cols() > 0) resid -= sel * (sel.transpose() * cand);
    if (resid.norm() > 1e-7 * std::max(cand.norm(), 1e-300)) {
      Eigen::MatrixXd next(op.n, sel.cols() + 1);
      next << sel, resid.normalized();
      sel = next;
      red.rows.push_back(r);
    }
  }
  if (static_cast<int>(red.rows.size()) < op.n)
    throw NotEllipticError("reduce_scalar_operator: could not select n well-conditioned rows");
  red.R.resize(op.n, op.n);
  for (int i = 0; i < op.n; ++i) red.R.row(i) = rows.row(red.rows[static_cast<std::size_t>(i)]);

  // coefficients of every row in the selected basis bound the constant
  Eigen::MatrixXd F = rows * red.R.inverse();
  red.c_upper = F.norm();

  std::mt19937_64 rng(seed ^ 0x6c62272e07bb0142ULL);
  red.verified = true;
  for (int s = 0; s < 1000; ++s) {
    Eigen::VectorXd xi = random_unit_vector(op.n, rng);
    const double full = (rows * xi).norm();
    const double reduced = (red.R * xi).norm();
    if (reduced > full * (1 + 1e-12) || full > red.c_upper * reduced * (1 + 1e-12)) {
      red.verified = false;
      break;
    }
  }
  return red;
}

// ---------------------------------------------------------------------------
// Combined report

struct ClassificationReport {
  std::string name;
  int n = 0, dimV = 0, dimW = 0, order = 0;
  EllipticityResult elliptic;
  EllipticityResult complex_elliptic;
  CancelingResult canceling;
  MixingResult mixing;
  int essential_range_dim = 0;
};

inline ClassificationReport classify_operator(const Operator& op, const Budget& budget = {},
                                              const Tolerances& tol = {}, std::uint64_t seed = 0) {
  validate_operator(op);
  ClassificationReport rep;
  rep.name = op.name;
  rep.n = op.n;
  rep.dimV = op.dimV;
  rep.dimW = op.dimW;
  rep.order = op.order;
  rep.elliptic = ellipticity_constant(op, budget, tol);
  rep.complex_elliptic = complex_ellipticity_constant(op, budget, tol);
  rep.canceling = is_canceling(op, budget, tol, seed);
  rep.mixing = mixing_check(op, budget, tol, seed);
  rep.essential_range_dim = rep.mixing.essential_range_dim;
  return rep;
}

}  // namespace symlab

#pragma once

// Homogeneous constant-coefficient operators A = sum_{|alpha|=k} A_alpha d^alpha
// with A_alpha in R^{M x N}, and the symbol calculus on top of them.

#include <symlab/multi_index.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace symlab {

struct Operator {
  int n = 0;     // space dimension
  int dimV = 0;  // domain fiber N
  int dimW = 0;  // target fiber M
  int order = 0; // homogeneity k >= 1
  std::vector<MultiIndex> alphas;       // enumeration of |alpha| = order
  std::vector<Eigen::MatrixXd> coeffs;  // aligned with alphas, each dimW x dimV
  std::string name;                     // optional display tag

  Eigen::MatrixXd& coeff(const MultiIndex& alpha) {
    return coeffs[static_cast<std::size_t>(multiindex_position(alphas, alpha))];
  }
  const Eigen::MatrixXd& coeff(const MultiIndex& alpha) const {
    return coeffs[static_cast<std::size_t>(multiindex_position(alphas, alpha))];
  }

  // sqrt of the sum of squared coefficient norms; scale for relative residuals.
  double coeff_norm() const {
    double s = 0;
    for (const auto& a : coeffs) s += a.squaredNorm();
    return std::sqrt(s);
  }
};

inline Operator make_operator(int n, int dimV, int dimW, int order, std::string name = "") {
  if (n < 1 || dimV < 1 || dimW < 1 || order < 1)
    throw std::invalid_argument("make_operator: dimensions and order must be positive");
  Operator op;
  op.n = n;
  op.dimV = dimV;
  op.dimW = dimW;
  op.order = order;
  op.alphas = multiindex_enumerate(n, order);
  op.coeffs.assign(op.alphas.size(), Eigen::MatrixXd::Zero(dimW, dimV));
  op.name = std::move(name);
  return op;
}

inline void validate_operator(const Operator& op) {
  if (op.n < 1 || op.dimV < 1 || op.dimW < 1 || op.order < 1)
    throw std::invalid_argument("operator: dimensions and order must be positive");
  if (op.alphas.size() != op.coeffs.size() ||
      op.alphas.size() != static_cast<std::size_t>(multiindex_count(op.n, op.order)))
    throw std::invalid_argument("operator: coefficient table size mismatch");
  bool nonzero = false;
  for (std::size_t i = 0; i < op.coeffs.size(); ++i) {
    if (op.coeffs[i].rows() != op.dimW || op.coeffs[i].cols() != op.dimV)
      throw std::invalid_argument("operator: coefficient matrix shape mismatch");
    if (multi_index_order(op.alphas[i]) != op.order)
      throw std::invalid_argument("operator: multi-index order mismatch");
    nonzero = nonzero || op.coeffs[i].squaredNorm() > 0;
  }
  if (!nonzero) throw std::invalid_argument("operator: all coefficients vanish");
}

// Principal symbol A^k(xi) = sum_alpha xi^alpha A_alpha, real or complex xi.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> symbol_eval(
    const Operator& op, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& xi) {
  if (xi.size() != op.n) throw std::invalid_argument("symbol_eval: xi has wrong dimension");
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> acc =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(op.dimW, op.dimV);
  for (std::size_t i = 0; i < op.alphas.size(); ++i)
    acc += monomial_eval<Scalar>(xi, op.alphas[i]) * op.coeffs[i].template cast<Scalar>();
  return acc;
}

inline Eigen::MatrixXd symbol_eval(const Operator& op, const Eigen::VectorXd& xi) {
  return symbol_eval<double>(op, xi);
}
inline Eigen::MatrixXcd symbol_eval_complex(const Operator& op, const Eigen::VectorXcd& xi) {
  return symbol_eval<std::complex<double>>(op, xi);
}

// The symbol as one linear map on V (x) E_k coordinates: column block alpha
// equals A_alpha, so that applying it to coords(v (x)^k xi) gives A^k(xi) v.
inline Eigen::MatrixXd linearized_symbol(const Operator& op) {
  const int block = op.dimV;
  Eigen::MatrixXd cl(op.dimW, static_cast<Eigen::Index>(op.alphas.size()) * block);
  for (std::size_t i = 0; i < op.alphas.size(); ++i)
    cl.middleCols(static_cast<Eigen::Index>(i) * block, block) = op.coeffs[i];
  return cl;
}

// Symmetric multiplication in coordinates: for m_coords in V (x) E_m and xi in
// R^n produces V (x) E_{m+1} coords with
//   (M . xi)_alpha = (1/|alpha|) sum_j alpha_j xi_j M_{alpha - e_j},
// the unique bilinear map sending coords(v (x)^m xi) to coords(v (x)^{m+1} xi).
inline Eigen::VectorXd sym_mul(const Eigen::VectorXd& m_coords, int n, int dimV, int m_order,
                               const Eigen::VectorXd& xi) {
  if (xi.size() != n) throw std::invalid_argument("sym_mul: xi has wrong dimension");
  auto src = multiindex_enumerate(n, m_order);
  auto dst = multiindex_enumerate(n, m_order + 1);
  if (m_coords.size() != static_cast<Eigen::Index>(src.size()) * dimV)
    throw std::invalid_argument("sym_mul: coordinate vector has wrong size");
  const double k = m_order + 1;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dst.size()) * dimV);
  for (std::size_t a = 0; a < dst.size(); ++a) {
    MultiIndex beta = dst[a];
    for (int j = 0; j < n; ++j) {
      if (beta[static_cast<std::size_t>(j)] == 0) continue;
      const double w = beta[static_cast<std::size_t>(j)] / k;
      beta[static_cast<std::size_t>(j)] -= 1;
      const int b = multiindex_position(src, beta);
      beta[static_cast<std::size_t>(j)] += 1;
      out.segment(static_cast<Eigen::Index>(a) * dimV, dimV) +=
          w * xi[j] * m_coords.segment(static_cast<Eigen::Index>(b) * dimV, dimV);
    }
  }
  return out;
}

inline int curl_row_count(int n, int m, int dimV) {
  if (m < 1) return 0;
  return static_cast<int>(binomial(n, 2)) * multiindex_count(n, m - 1) * dimV;
}

// Symbol of the symmetric-coordinate curl on V (x) E_m fields: row (i<j, beta, l)
// evaluates xi_i U^l_{beta+e_j} - xi_j U^l_{beta+e_i}.  Rows are ordered by the
// pair (i,j) lexicographically, then beta, then l.  Its kernel for xi != 0 is
// exactly {coords(v (x)^m xi)}.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> curl_symbol_t(
    int n, int m, int dimV, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& xi) {
  if (xi.size() != n) throw std::invalid_argument("curl_symbol: xi has wrong dimension");
  if (m < 1) return Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(0, dimV);
  auto betas = multiindex_enumerate(n, m - 1);
  auto cols = multiindex_enumerate(n, m);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(
          curl_row_count(n, m, dimV), static_cast<Eigen::Index>(cols.size()) * dimV);
  Eigen::Index row = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (const auto& beta : betas) {
        MultiIndex bi = beta, bj = beta;
        bi[static_cast<std::size_t>(i)] += 1;
        bj[static_cast<std::size_t>(j)] += 1;
        const int pi = multiindex_position(cols, bi);
        const int pj = multiindex_position(cols, bj);
        for (int l = 0; l < dimV; ++l) {
          out(row, static_cast<Eigen::Index>(pj) * dimV + l) += xi[i];
          out(row, static_cast<Eigen::Index>(pi) * dimV + l) -= xi[j];
          ++row;
        }
      }
  return out;
}

inline Eigen::MatrixXd curl_symbol(int n, int m, int dimV, const Eigen::VectorXd& xi) {
  return curl_symbol_t<double>(n, m, dimV, xi);
}

}  // namespace symlab

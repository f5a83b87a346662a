#pragma once

// Multi-indices and coordinates for symmetric tensor powers E_m(R^n).
//
// Coordinate convention used throughout: an element of E_m(R^n) is a vector
// indexed by the multi-indices |alpha| = m in exponent-lexicographic order
// (largest first exponent first), and the pure power of xi has coordinates
// (xi^alpha)_alpha.  An element of V (x) E_m is stored alpha-major: entry
// a*N + l holds the V-component l of the alpha-block, so v (x) pure-power
// has coordinates (v_l xi^alpha).

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace symlab {

using MultiIndex = std::vector<int>;

inline int multi_index_order(const MultiIndex& alpha) {
  int s = 0;
  for (int a : alpha) {
    if (a < 0) throw std::invalid_argument("multi-index entries must be nonnegative");
    s += a;
  }
  return s;
}

inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  k = std::min(k, n - k);
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// dim E_k(R^n) = C(n+k-1, k)
inline int multiindex_count(int n, int k) {
  if (n <= 0 || k < 0) throw std::invalid_argument("multiindex_count: need n >= 1, k >= 0");
  return static_cast<int>(binomial(n + k - 1, k));
}

// All |alpha| = k over n variables, exponent-lexicographic:
// (2,0) before (1,1) before (0,2).
inline std::vector<MultiIndex> multiindex_enumerate(int n, int k) {
  if (n <= 0 || k < 0) throw std::invalid_argument("multiindex_enumerate: need n >= 1, k >= 0");
  std::vector<MultiIndex> out;
  out.reserve(static_cast<std::size_t>(multiindex_count(n, k)));
  MultiIndex cur(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto&& self, int pos, int rem) -> void {
    if (pos == n - 1) {
      cur[static_cast<std::size_t>(pos)] = rem;
      out.push_back(cur);
      return;
    }
    for (int a = rem; a >= 0; --a) {
      cur[static_cast<std::size_t>(pos)] = a;
      self(self, pos + 1, rem - a);
    }
  };
  rec(rec, 0, k);
  return out;
}

inline int multiindex_position(const std::vector<MultiIndex>& enumeration, const MultiIndex& alpha) {
  for (std::size_t i = 0; i < enumeration.size(); ++i)
    if (enumeration[i] == alpha) return static_cast<int>(i);
  throw std::invalid_argument("multi-index not in enumeration");
}

// k! / prod(alpha_i!), the multinomial weight of alpha.
inline std::int64_t multinomial(const MultiIndex& alpha) {
  int k = multi_index_order(alpha);
  std::int64_t r = 1;
  int rem = k;
  for (int a : alpha) {
    r *= binomial(rem, a);
    rem -= a;
  }
  return r;
}

template <typename Scalar>
Scalar monomial_eval(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& xi, const MultiIndex& alpha) {
  if (xi.size() != static_cast<Eigen::Index>(alpha.size()))
    throw std::invalid_argument("monomial_eval: dimension mismatch");
  Scalar v = Scalar(1);
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (int j = 0; j < alpha[i]; ++j) v *= xi[static_cast<Eigen::Index>(i)];
  return v;
}

// Coordinates of the pure power (x)^m xi, i.e. (xi^alpha)_{|alpha|=m}.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pure_power_coords(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& xi, int m) {
  const int n = static_cast<int>(xi.size());
  auto alphas = multiindex_enumerate(n, m);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> c(static_cast<Eigen::Index>(alphas.size()));
  for (std::size_t i = 0; i < alphas.size(); ++i)
    c[static_cast<Eigen::Index>(i)] = monomial_eval<Scalar>(xi, alphas[i]);
  return c;
}

// Coordinates of v (x) ((x)^m xi) in the alpha-major layout.
inline Eigen::VectorXd tensor_coords(const Eigen::VectorXd& v, const Eigen::VectorXd& xi, int m) {
  Eigen::VectorXd p = pure_power_coords<double>(xi, m);
  Eigen::VectorXd out(p.size() * v.size());
  for (Eigen::Index a = 0; a < p.size(); ++a) out.segment(a * v.size(), v.size()) = p[a] * v;
  return out;
}

// Covector coordinates of the functional <v (x) ((x)^m xi), .>: the Euclidean
// dot of this vector against tensor_coords(u, eta, m) equals <v,u>(xi.eta)^m.
inline Eigen::VectorXd tensor_dual_coords(const Eigen::VectorXd& v, const Eigen::VectorXd& xi,
                                          int m) {
  const int n = static_cast<int>(xi.size());
  auto alphas = multiindex_enumerate(n, m);
  Eigen::VectorXd out(static_cast<Eigen::Index>(alphas.size()) * v.size());
  for (std::size_t a = 0; a < alphas.size(); ++a)
    out.segment(static_cast<Eigen::Index>(a) * v.size(), v.size()) =
        static_cast<double>(multinomial(alphas[a])) * monomial_eval<double>(xi, alphas[a]) * v;
  return out;
}

// Frobenius pairing of symmetric m-tensors in these coordinates:
// <S,T> = sum_alpha multinomial(alpha) S_alpha T_alpha, so that pure powers
// pair to (xi . eta)^m.
inline double sym_tensor_pairing(int n, int m, const Eigen::VectorXd& s, const Eigen::VectorXd& t) {
  auto alphas = multiindex_enumerate(n, m);
  if (s.size() != static_cast<Eigen::Index>(alphas.size()) || t.size() != s.size())
    throw std::invalid_argument("sym_tensor_pairing: size mismatch");
  double acc = 0;
  for (std::size_t i = 0; i < alphas.size(); ++i)
    acc += static_cast<double>(multinomial(alphas[i])) * s[static_cast<Eigen::Index>(i)] *
           t[static_cast<Eigen::Index>(i)];
  return acc;
}

}  // namespace symlab

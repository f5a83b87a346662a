#pragma once

// Built-in operator constructors.  Target fibers valued in symmetric tensors
// use the E_m coordinate convention of multi_index.hpp.

#include <symlab/operator.hpp>

#include <set>
#include <sstream>

namespace symlab {

struct CatalogParams {
  int n = 2;
  int N = 1;            // domain fiber where applicable
  int k = 1;            // order (Dk, scrDk) or domain tensor degree (Ek)
  Eigen::MatrixXd R;    // div_form only
};

inline std::vector<std::string> catalog_names() {
  return {"gradient", "Dk",     "symgrad",    "Ek",        "scrDk",
          "div_form", "deviatoric", "divcurl", "laplacian", "delbar"};
}

inline MultiIndex unit_multi_index(int n, int j) {
  MultiIndex e(static_cast<std::size_t>(n), 0);
  e[static_cast<std::size_t>(j)] = 1;
  return e;
}

namespace detail {

// u -> D^k u, target V (x) E_k coordinates (row a*N + l holds d^alpha u^l).
inline Operator make_Dk(int n, int N, int k, const std::string& name) {
  Operator op = make_operator(n, N, N * multiindex_count(n, k), k, name);
  for (std::size_t a = 0; a < op.alphas.size(); ++a)
    for (int l = 0; l < N; ++l)
      op.coeffs[a](static_cast<Eigen::Index>(a) * N + l, l) = 1.0;
  return op;
}

// v -> sym(Dv) on E_k-valued fields; for k = 1 this is the symmetric gradient.
// In evaluation coefficients the symbol is multiplication by the linear form
// xi . eta, so (A(xi) v)_alpha = sum_j xi_j v_{alpha - e_j}.
inline Operator make_Ek(int n, int k, const std::string& name) {
  const int N = multiindex_count(n, k);
  const int M = multiindex_count(n, k + 1);
  Operator op = make_operator(n, N, M, 1, name);
  auto dom = multiindex_enumerate(n, k);
  auto tgt = multiindex_enumerate(n, k + 1);
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXd& A = op.coeff(unit_multi_index(n, j));
    for (std::size_t b = 0; b < dom.size(); ++b) {
      MultiIndex alpha = dom[b];
      alpha[static_cast<std::size_t>(j)] += 1;
      A(multiindex_position(tgt, alpha), static_cast<Eigen::Index>(b)) += 1.0;
    }
  }
  return op;
}

}  // namespace detail

inline Operator catalog(const std::string& name, const CatalogParams& p) {
  const int n = p.n;
  if (n < 1) throw std::invalid_argument("catalog: n must be positive");
  std::ostringstream tag;
  if (name == "gradient") {
    tag << "gradient(n=" << n << ",N=" << p.N << ")";
    return detail::make_Dk(n, p.N, 1, tag.str());
  }
  if (name == "Dk") {
    tag << "Dk(n=" << n << ",N=" << p.N << ",k=" << p.k << ")";
    return detail::make_Dk(n, p.N, p.k, tag.str());
  }
  if (name == "symgrad") {
    if (n < 2) throw std::invalid_argument("symgrad: needs n >= 2");
    tag << "symgrad(n=" << n << ")";
    Operator op = detail::make_Ek(n, 1, tag.str());
    return op;
  }
  if (name == "Ek") {
    if (p.k < 1) throw std::invalid_argument("Ek: needs k >= 1");
    tag << "Ek(n=" << n << ",k=" << p.k << ")";
    return detail::make_Ek(n, p.k, tag.str());
  }
  if (name == "scrDk") {
    tag << "scrDk(n=" << n << ",k=" << p.k << ")";
    Operator op = make_operator(n, 1, n, p.k, tag.str());
    for (int i = 0; i < n; ++i) {
      MultiIndex a(static_cast<std::size_t>(n), 0);
      a[static_cast<std::size_t>(i)] = p.k;
      op.coeff(a)(i, 0) = 1.0;
    }
    return op;
  }
  if (name == "div_form") {
    if (p.R.size() == 0 || p.R.cols() != n)
      throw std::invalid_argument("div_form: R must be an M x n matrix");
    tag << "div_form(n=" << n << ",rows=" << p.R.rows() << ")";
    Operator op = make_operator(n, 1, static_cast<int>(p.R.rows()), 1, tag.str());
    for (int j = 0; j < n; ++j) op.coeff(unit_multi_index(n, j)).col(0) = p.R.col(j);
    return op;
  }
  if (name == "deviatoric") {
    if (n < 2) throw std::invalid_argument("deviatoric: needs n >= 2");
    tag << "deviatoric(n=" << n << ")";
    Operator op = detail::make_Ek(n, 1, tag.str());
    auto tgt = multiindex_enumerate(n, 2);
    for (int j = 0; j < n; ++j) {
      Eigen::MatrixXd& A = op.coeff(unit_multi_index(n, j));
      for (int i = 0; i < n; ++i) {
        MultiIndex a(static_cast<std::size_t>(n), 0);
        a[static_cast<std::size_t>(i)] = 2;
        A(multiindex_position(tgt, a), j) -= 1.0 / n;
      }
    }
    return op;
  }
  if (name == "divcurl" || name == "delbar") {
    if (name == "delbar" && n != 2)
      throw std::invalid_argument("delbar: defined for n = 2");
    if (n < 2) throw std::invalid_argument("divcurl: needs n >= 2");
    tag << name << "(n=" << n << ")";
    const int curl_rows = static_cast<int>(binomial(n, 2));
    Operator op = make_operator(n, n, 1 + curl_rows, 1, tag.str());
    for (int j = 0; j < n; ++j) op.coeff(unit_multi_index(n, j))(0, j) = 1.0;
    int r = 1;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        op.coeff(unit_multi_index(n, i))(r, j) += 1.0;
        op.coeff(unit_multi_index(n, j))(r, i) -= 1.0;
        ++r;
      }
    return op;
  }
  if (name == "laplacian") {
    tag << "laplacian(n=" << n << ")";
    Operator op = make_operator(n, 1, 1, 2, tag.str());
    for (int i = 0; i < n; ++i) {
      MultiIndex a(static_cast<std::size_t>(n), 0);
      a[static_cast<std::size_t>(i)] = 2;
      op.coeff(a)(0, 0) = 1.0;
    }
    return op;
  }
  throw std::invalid_argument("catalog: unknown operator name '" + name + "'");
}

}  // namespace symlab

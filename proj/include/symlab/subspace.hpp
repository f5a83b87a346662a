#pragma once

// Numeric-rank based subspace arithmetic.  All cutoffs are relative to the
// largest singular value of the matrix at hand; tol = 0 is never used.

#include <Eigen/Dense>

#include <stdexcept>

namespace symlab {

inline constexpr double kDefaultRankTol = 1e-9;

template <typename Derived>
int numeric_rank(const Eigen::MatrixBase<Derived>& m, double tol = kDefaultRankTol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::JacobiSVD<Mat> svd(m.derived());
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] <= 0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > tol * sv[0]) ++r;
  return r;
}

// Subspace of R^d held as a matrix with orthonormal columns (d x dim).
struct Subspace {
  int ambient = 0;
  Eigen::MatrixXd basis;  // orthonormal columns; 0 columns = zero subspace

  int dim() const { return static_cast<int>(basis.cols()); }
  bool is_zero() const { return basis.cols() == 0; }

  static Subspace zero(int ambient_dim) {
    Subspace s;
    s.ambient = ambient_dim;
    s.basis = Eigen::MatrixXd::Zero(ambient_dim, 0);
    return s;
  }
  static Subspace full(int ambient_dim) {
    Subspace s;
    s.ambient = ambient_dim;
    s.basis = Eigen::MatrixXd::Identity(ambient_dim, ambient_dim);
    return s;
  }

  Eigen::MatrixXd projector() const { return basis * basis.transpose(); }

  // Distance of a unit-scaled vector to the subspace, relative to |v|.
  double distance(const Eigen::VectorXd& v) const {
    double nv = v.norm();
    if (nv == 0) return 0;
    return (v - basis * (basis.transpose() * v)).norm() / nv;
  }
  bool contains(const Eigen::VectorXd& v, double tol = 1e-8) const { return distance(v) <= tol; }
};

// Span of the columns of m, orthonormalized by SVD.
inline Subspace subspace_span(const Eigen::MatrixXd& m, double tol = kDefaultRankTol) {
  Subspace s;
  s.ambient = static_cast<int>(m.rows());
  if (m.cols() == 0) {
    s.basis = Eigen::MatrixXd::Zero(m.rows(), 0);
    return s;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int r = 0;
  if (sv.size() > 0 && sv[0] > 0)
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv[i] > tol * sv[0]) ++r;
  s.basis = svd.matrixU().leftCols(r);
  return s;
}

// Orthogonal complement, via completion of the basis to a full orthonormal one.
inline Subspace subspace_orthocomplement(const Subspace& s) {
  Subspace c;
  c.ambient = s.ambient;
  if (s.dim() == 0) {
    c.basis = Eigen::MatrixXd::Identity(s.ambient, s.ambient);
    return c;
  }
  if (s.dim() == s.ambient) {
    c.basis = Eigen::MatrixXd::Zero(s.ambient, 0);
    return c;
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(s.basis);
  Eigen::MatrixXd q = qr.householderQ();
  c.basis = q.rightCols(s.ambient - s.dim());
  return c;
}

// Intersection by principal angles: keep directions whose cosine is 1 up to tol.
inline Subspace subspace_intersect(const Subspace& a, const Subspace& b,
                                   double tol = kDefaultRankTol) {
  if (a.ambient != b.ambient) throw std::invalid_argument("subspace_intersect: ambient mismatch");
  if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(a.ambient);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a.basis.transpose() * b.basis,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& cosines = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < cosines.size(); ++i)
    if (cosines[i] >= 1.0 - 10 * tol) ++r;
  Subspace s;
  s.ambient = a.ambient;
  s.basis = a.basis * svd.matrixU().leftCols(r);
  return s;
}

// Span of the union of two subspaces.
inline Subspace subspace_sum(const Subspace& a, const Subspace& b, double tol = kDefaultRankTol) {
  if (a.ambient != b.ambient) throw std::invalid_argument("subspace_sum: ambient mismatch");
  Eigen::MatrixXd m(a.ambient, a.dim() + b.dim());
  m << a.basis, b.basis;
  return subspace_span(m, tol);
}

// Kernel of m as a subspace of the domain.
template <typename Derived>
Subspace nullspace(const Eigen::MatrixBase<Derived>& m, double tol = kDefaultRankTol) {
  Subspace s;
  s.ambient = static_cast<int>(m.cols());
  if (m.cols() == 0) {
    s.basis = Eigen::MatrixXd::Zero(0, 0);
    return s;
  }
  if (m.rows() == 0) {
    s.basis = Eigen::MatrixXd::Identity(m.cols(), m.cols());
    return s;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.derived(), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int r = 0;
  if (sv.size() > 0 && sv[0] > 0)
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv[i] > tol * sv[0]) ++r;
  s.basis = svd.matrixV().rightCols(m.cols() - r);
  return s;
}

// Smallest singular value of a real or complex matrix.
template <typename Derived>
double smallest_singular_value(const Eigen::MatrixBase<Derived>& m) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::JacobiSVD<Mat> svd(m.derived());
  const auto& sv = svd.singularValues();
  return sv.size() ? sv[sv.size() - 1] : 0.0;
}

}  // namespace symlab

#pragma once

// Deterministic direction generation and a compass search on the unit sphere.
// Used for ellipticity minimization and direction schedules; everything here
// is reproducible for a fixed seed.

#include <symlab/subspace.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace symlab {

inline double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  std::uint64_t i = index + 1;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
  }
  return r;
}

// Canonical axes followed by normalized pairwise sums/differences.
inline std::vector<Eigen::VectorXd> canonical_directions(int n) {
  std::vector<Eigen::VectorXd> pts;
  for (int i = 0; i < n; ++i) pts.push_back(Eigen::VectorXd::Unit(n, i));
  const double s = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      pts.push_back(s * (Eigen::VectorXd::Unit(n, i) + Eigen::VectorXd::Unit(n, j)));
      pts.push_back(s * (Eigen::VectorXd::Unit(n, i) - Eigen::VectorXd::Unit(n, j)));
    }
  return pts;
}

// Low-discrepancy points on S^{n-1}: equal angles for n = 2, a Fibonacci
// lattice for n = 3, Halton-driven Box-Muller for higher n.
inline std::vector<Eigen::VectorXd> low_discrepancy_sphere(int n, int count) {
  std::vector<Eigen::VectorXd> pts;
  pts.reserve(static_cast<std::size_t>(count));
  if (n == 1) {
    pts.push_back(Eigen::VectorXd::Constant(1, 1.0));
    pts.push_back(Eigen::VectorXd::Constant(1, -1.0));
    return pts;
  }
  if (n == 2) {
    for (int i = 0; i < count; ++i) {
      const double t = 2.0 * M_PI * i / count;
      Eigen::VectorXd p(2);
      p << std::cos(t), std::sin(t);
      pts.push_back(p);
    }
    return pts;
  }
  if (n == 3) {
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double t = 2.0 * M_PI * i / golden;
      Eigen::VectorXd p(3);
      p << r * std::cos(t), r * std::sin(t), z;
      pts.push_back(p);
    }
    return pts;
  }
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};
  const int pairs = (n + 1) / 2;
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd p(n);
    for (int q = 0; q < pairs; ++q) {
      const double u = std::min(std::max(halton(static_cast<std::uint64_t>(i), primes[2 * q]), 1e-12), 1.0);
      const double v = halton(static_cast<std::uint64_t>(i), primes[2 * q + 1]);
      const double rad = std::sqrt(-2.0 * std::log(u));
      if (2 * q < n) p[2 * q] = rad * std::cos(2.0 * M_PI * v);
      if (2 * q + 1 < n) p[2 * q + 1] = rad * std::sin(2.0 * M_PI * v);
    }
    const double nrm = p.norm();
    if (nrm > 1e-12) pts.push_back(p / nrm);
  }
  return pts;
}

inline Eigen::VectorXd random_unit_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd v(n);
  double nrm = 0;
  do {
    for (int i = 0; i < n; ++i) v[i] = g(rng);
    nrm = v.norm();
  } while (nrm < 1e-12);
  return v / nrm;
}

// Direction schedule for intersection/search loops: canonical axes, pair
// combinations, then seeded random unit vectors, `count` in total.
inline std::vector<Eigen::VectorXd> direction_schedule(int n, int count, std::uint64_t seed) {
  std::vector<Eigen::VectorXd> pts = canonical_directions(n);
  std::mt19937_64 rng(seed);
  while (static_cast<int>(pts.size()) < count) pts.push_back(random_unit_vector(n, rng));
  if (static_cast<int>(pts.size()) > count) pts.resize(static_cast<std::size_t>(count));
  return pts;
}

// Orthonormal basis of the tangent space at unit x (columns).
inline Eigen::MatrixXd tangent_basis(const Eigen::VectorXd& x) {
  Subspace line;
  line.ambient = static_cast<int>(x.size());
  line.basis = x;
  return subspace_orthocomplement(line).basis;
}

struct SphereMinResult {
  Eigen::VectorXd point;
  double value = 0;
  int iterations = 0;
};

// Compass search on the unit sphere: step along tangent directions with a
// shrinking radius.  Objective must be continuous; convergence target is the
// step size, not the gradient.
inline SphereMinResult compass_minimize_sphere(
    const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& start,
    double initial_step = 0.5, int max_iter = 500, double min_step = 1e-13) {
  SphereMinResult res;
  Eigen::VectorXd x = start.normalized();
  double fx = f(x);
  double h = initial_step;
  int it = 0;
  while (h > min_step && it < max_iter) {
    ++it;
    Eigen::MatrixXd tb = tangent_basis(x);
    Eigen::VectorXd best_x = x;
    double best_f = fx;
    for (Eigen::Index c = 0; c < tb.cols(); ++c)
      for (double s : {1.0, -1.0}) {
        Eigen::VectorXd cand = (x + s * h * tb.col(c)).normalized();
        const double fc = f(cand);
        if (fc < best_f) {
          best_f = fc;
          best_x = cand;
        }
      }
    if (best_f < fx) {
      x = best_x;
      fx = best_f;
    } else {
      h *= 0.5;
    }
  }
  res.point = x;
  res.value = fx;
  res.iterations = it;
  return res;
}

}  // namespace symlab

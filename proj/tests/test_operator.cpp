#include <symlab/catalog.hpp>
#include <symlab/operator.hpp>
#include <symlab/subspace.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace symlab;

namespace {

Operator random_operator(int n, int N, int M, int k, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Operator op = make_operator(n, N, M, k, "random");
  for (auto& a : op.coeffs)
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < N; ++j) a(i, j) = g(rng);
  return op;
}

Eigen::VectorXd random_vec(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v;
}

}  // namespace

TEST_CASE("operator validation rejects malformed data") {
  Operator op = make_operator(2, 1, 1, 1);
  CHECK_THROWS_AS(validate_operator(op), std::invalid_argument);  // all zero
  op.coeff({1, 0})(0, 0) = 1.0;
  CHECK_NOTHROW(validate_operator(op));
  op.coeffs[0] = Eigen::MatrixXd::Zero(2, 1);
  CHECK_THROWS_AS(validate_operator(op), std::invalid_argument);  // bad shape
}

TEST_CASE("gradient and laplacian symbols") {
  Operator grad = catalog("gradient", {.n = 2, .N = 1});
  Eigen::VectorXd xi(2);
  xi << 3, 4;
  Eigen::MatrixXd s = symbol_eval(grad, xi);
  REQUIRE(s.rows() == 2);
  CHECK(s(0, 0) == Catch::Approx(3.0));
  CHECK(s(1, 0) == Catch::Approx(4.0));

  Operator lap = catalog("laplacian", {.n = 2});
  xi << 1, 2;
  CHECK(symbol_eval(lap, xi)(0, 0) == Catch::Approx(5.0));

  Eigen::VectorXcd zi(2);
  zi << std::complex<double>(1, 0), std::complex<double>(0, 1);
  CHECK(std::abs(symbol_eval_complex(lap, zi)(0, 0)) == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("linearized symbol blocks") {
  Operator lap = catalog("laplacian", {.n = 2});
  Eigen::MatrixXd cl = linearized_symbol(lap);
  REQUIRE(cl.rows() == 1);
  REQUIRE(cl.cols() == 3);
  CHECK(cl(0, 0) == 1.0);
  CHECK(cl(0, 1) == 0.0);
  CHECK(cl(0, 2) == 1.0);

  Operator d2 = catalog("scrDk", {.n = 2, .k = 2});
  Eigen::MatrixXd cl2 = linearized_symbol(d2);
  Eigen::MatrixXd expect(2, 3);
  expect << 1, 0, 0, 0, 0, 1;
  CHECK((cl2 - expect).norm() == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("linearized symbol contracts pure tensors to the symbol") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 2 + static_cast<int>(rng() % 2);
    int k = 1 + static_cast<int>(rng() % 3);
    Operator op = random_operator(n, 2, 3, k, rng);
    Eigen::VectorXd xi = random_vec(n, rng);
    Eigen::VectorXd v = random_vec(2, rng);
    Eigen::VectorXd lhs = linearized_symbol(op) * tensor_coords(v, xi, k);
    Eigen::VectorXd rhs = symbol_eval(op, xi) * v;
    const double scale =
        std::pow(xi.norm(), k) * v.norm() * op.coeff_norm() + 1e-300;
    CHECK((lhs - rhs).norm() / scale < 1e-12);
  }
}

TEST_CASE("sym_mul maps pure powers to pure powers") {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + static_cast<int>(rng() % 3);
    int m = static_cast<int>(rng() % 3);
    int N = 1 + static_cast<int>(rng() % 2);
    Eigen::VectorXd xi = random_vec(n, rng);
    Eigen::VectorXd v = random_vec(N, rng);
    Eigen::VectorXd in = tensor_coords(v, xi, m);
    Eigen::VectorXd out = sym_mul(in, n, N, m, xi);
    Eigen::VectorXd expect = tensor_coords(v, xi, m + 1);
    CHECK((out - expect).norm() < 1e-10 * (expect.norm() + 1));
  }
}

TEST_CASE("sym_mul hand value") {
  // (M . xi)_alpha = (1/k) sum_j alpha_j xi_j M_{alpha-e_j};
  // for M = (v1, v2), xi = (1, 0): ((2/2) v1, (1/2) v2, 0)
  Eigen::VectorXd m(2);
  m << 4, 6;
  Eigen::VectorXd xi(2);
  xi << 1, 0;
  Eigen::VectorXd out = sym_mul(m, 2, 1, 1, xi);
  REQUIRE(out.size() == 3);
  CHECK(out[0] == Catch::Approx(4.0));
  CHECK(out[1] == Catch::Approx(3.0));
  CHECK(out[2] == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("curl symbol hand values") {
  Eigen::VectorXd xi(2);
  xi << 1, 0;
  Eigen::MatrixXd c = curl_symbol(2, 1, 1, xi);
  REQUIRE(c.rows() == 1);
  REQUIRE(c.cols() == 2);
  CHECK(c(0, 0) == Catch::Approx(0.0));
  CHECK(c(0, 1) == Catch::Approx(1.0));

  // n = 2, m = 2, xi = (1,1): rows beta = (1,0) and (0,1)
  Eigen::VectorXd d(2);
  d << 1, 1;
  Eigen::MatrixXd c2 = curl_symbol(2, 2, 1, d);
  REQUIRE(c2.rows() == 2);
  Eigen::MatrixXd expect(2, 3);
  expect << -1, 1, 0, 0, -1, 1;
  CHECK((c2 - expect).norm() == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("curl kernel is exactly the pure tensors") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + static_cast<int>(rng() % 2);
    int m = 1 + static_cast<int>(rng() % 2);
    int N = 1 + static_cast<int>(rng() % 2);
    Eigen::VectorXd xi = random_vec(n, rng);
    if (xi.norm() < 0.3) continue;
    Eigen::MatrixXd c = curl_symbol(n, m, N, xi);
    Subspace ker = nullspace(c);
    CHECK(ker.dim() == N);
    Eigen::VectorXd v = random_vec(N, rng);
    CHECK(ker.contains(tensor_coords(v, xi, m), 1e-8));
  }
  // axis-aligned direction, spec kernel: v (x) e_1
  Eigen::VectorXd e1(2);
  e1 << 1, 0;
  Subspace ker = nullspace(curl_symbol(2, 1, 1, e1));
  REQUIRE(ker.dim() == 1);
  CHECK(std::abs(ker.basis(0, 0)) == Catch::Approx(1.0));
}

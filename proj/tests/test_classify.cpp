#include <symlab/catalog.hpp>
#include <symlab/classify.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace symlab;

namespace {

Budget small_budget() {
  Budget b;
  b.sphere_samples = 512;
  b.random_directions = 48;
  b.restarts = 40;
  return b;
}

Eigen::VectorXd unit(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v.normalized();
}

}  // namespace

TEST_CASE("laplacian ellipticity constant is one") {
  Operator lap = catalog("laplacian", {.n = 2});
  auto res = ellipticity_constant(lap, small_budget());
  CHECK(res.verdict == Verdict::Yes);
  CHECK(res.constant == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("divcurl is elliptic with constant one but not complex-elliptic") {
  Operator f = catalog("divcurl", {.n = 2});
  auto re = ellipticity_constant(f, small_budget());
  CHECK(re.verdict == Verdict::Yes);
  CHECK(re.constant == Catch::Approx(1.0).margin(1e-9));

  auto ce = complex_ellipticity_constant(f, small_budget());
  REQUIRE(ce.verdict == Verdict::No);
  // witness direction annihilates the symbol
  Eigen::MatrixXcd s = symbol_eval_complex(f, Eigen::VectorXcd(ce.xi));
  CHECK(smallest_singular_value(s) < 1e-9);
  CHECK((s * ce.null_direction).norm() < 1e-7);
}

TEST_CASE("gradient is complex-elliptic and canceling") {
  Operator g = catalog("gradient", {.n = 2, .N = 2});
  CHECK(ellipticity_constant(g, small_budget()).verdict == Verdict::Yes);
  CHECK(complex_ellipticity_constant(g, small_budget()).verdict == Verdict::Yes);
  auto canc = is_canceling(g, small_budget());
  CHECK(canc.verdict == Verdict::Yes);
  CHECK(canc.common.dim() == 0);
}

TEST_CASE("rank-deficient div_form fails ellipticity at the right direction") {
  Eigen::MatrixXd r(2, 2);
  r << 1, 0, 0, 0;
  Operator a = catalog("div_form", {.n = 2, .R = r});
  auto res = ellipticity_constant(a, small_budget());
  REQUIRE(res.verdict == Verdict::No);
  CHECK(std::abs(res.xi[1]) == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("laplacian and divcurl are not canceling") {
  auto lap = is_canceling(catalog("laplacian", {.n = 2}), small_budget());
  CHECK(lap.verdict == Verdict::No);
  CHECK(lap.common.dim() == 1);
  auto dc = is_canceling(catalog("divcurl", {.n = 2}), small_budget());
  CHECK(dc.verdict == Verdict::No);
  CHECK(dc.common.dim() == 2);
}

TEST_CASE("essential range of the deviatoric operator is the trace-free plane") {
  Operator dev = catalog("deviatoric", {.n = 2});
  Subspace wa = essential_range(dev, small_budget());
  CHECK(wa.dim() == 2);
  Eigen::VectorXd id_coords(3);
  id_coords << 1, 0, 1;
  CHECK(subspace_orthocomplement(wa).contains(id_coords.normalized(), 1e-8));
}

TEST_CASE("hyperplane nullspace of symgrad at an axis") {
  Operator sg = catalog("symgrad", {.n = 2});
  Eigen::VectorXd e1 = unit({1, 0});
  auto hn = hyperplane_nullspace(sg, e1);
  REQUIRE(hn.nullspace.dim() == 1);
  Eigen::VectorXd w(3);
  w << 1, 0, 0;
  CHECK(hn.nullspace.contains(w, 1e-9));

  ExtractResult ex = extract_spectral_pair(sg, w, e1);
  REQUIRE(ex.ok);
  CHECK(!ex.trivial);
  CHECK(ex.residual < 1e-10);
  // coordinate proportional to e1
  CHECK(std::abs(ex.coordinate[1]) < 1e-10);
  CHECK(ex.coordinate[0] == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("spectral pairs of symgrad along random directions are (xi, xi)") {
  Operator sg = catalog("symgrad", {.n = 2});
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd xi = random_unit_vector(2, rng);
    auto hn = hyperplane_nullspace(sg, xi, {}, trial);
    REQUIRE(hn.nullspace.dim() == 1);
    ExtractResult ex = extract_spectral_pair(sg, hn.nullspace.basis.col(0), xi, {}, trial);
    REQUIRE(ex.ok);
    Eigen::VectorXd e = ex.coordinate;
    CHECK(std::abs(std::abs(e.normalized().dot(xi)) - 1.0) < 1e-8);
  }
}

TEST_CASE("witness fit rejects non-proportional symgrad pairs") {
  Operator sg = catalog("symgrad", {.n = 2});
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd xi = random_unit_vector(2, rng);
    Eigen::VectorXd eta = random_unit_vector(2, rng);
    double cosang = std::abs(xi.dot(eta));
    WitnessFit fit = witness_for_pair(sg, xi, eta);
    if (cosang > 1.0 - 1e-6) {
      CHECK(fit.residual < 1e-8);
    } else if (cosang < 0.995) {
      CHECK(fit.residual >= 1e-3);
    }
  }
  // proportional pair fits exactly
  Eigen::VectorXd xi = unit({0.6, -0.8});
  CHECK(witness_for_pair(sg, xi, xi).residual < 1e-10);
}

TEST_CASE("D2 hyperplane nullspace and pair extraction") {
  Operator d2 = catalog("Dk", {.n = 2, .N = 1, .k = 2});
  Eigen::VectorXd e1 = unit({1, 0});
  auto hn = hyperplane_nullspace(d2, e1);
  REQUIRE(hn.nullspace.dim() == 2);
  Eigen::VectorXd w(3);
  w << 0, 1, 0;  // the mixed-derivative coordinate
  CHECK(hn.nullspace.contains(w, 1e-9));
  ExtractResult ex = extract_spectral_pair(d2, w, e1);
  REQUIRE(ex.ok);
  REQUIRE(ex.coordinate.size() == 2);
  CHECK(std::abs(ex.coordinate[0]) < 1e-10);
  CHECK(ex.coordinate[1] == Catch::Approx(1.0).margin(1e-10));
}

TEST_CASE("mixing verdicts across the catalog") {
  auto b = small_budget();
  CHECK(mixing_check(catalog("symgrad", {.n = 2}), b).verdict == SearchVerdict::Verified);
  CHECK(mixing_check(catalog("gradient", {.n = 2, .N = 2}), b).verdict ==
        SearchVerdict::Verified);
  CHECK(mixing_check(catalog("scrDk", {.n = 2, .k = 2}), b).verdict == SearchVerdict::Verified);
  CHECK(mixing_check(catalog("Dk", {.n = 2, .N = 1, .k = 2}), b).verdict ==
        SearchVerdict::Verified);

  auto lap = mixing_check(catalog("laplacian", {.n = 2}), b);
  CHECK(lap.verdict == SearchVerdict::NotFoundWithinBudget);
  CHECK(lap.pairs.empty());
  CHECK(lap.witness_span_dim == 0);

  auto dc = mixing_check(catalog("divcurl", {.n = 2}), b);
  CHECK(dc.verdict == SearchVerdict::NotFoundWithinBudget);
  CHECK(dc.witness_span_dim == 0);

  auto dev = mixing_check(catalog("deviatoric", {.n = 2}), b);
  CHECK(dev.verdict == SearchVerdict::NotFoundWithinBudget);
  CHECK(dev.pairs.empty());  // only the rank-zero annihilator direction shows up
}

TEST_CASE("symgrad mixing produces three pairs from the axis schedule") {
  auto mix = mixing_check(catalog("symgrad", {.n = 2}), small_budget());
  REQUIRE(mix.verdict == SearchVerdict::Verified);
  CHECK(mix.pairs.size() == 3);
  CHECK(mix.demorgan_consistent);
  for (const auto& p : mix.pairs) {
    CHECK(p.residual < 1e-8);
    CHECK(std::abs(std::abs(p.coordinate.normalized().dot(p.xi)) - 1.0) < 1e-8);
  }
}

TEST_CASE("scalar reduction picks the leading independent rows") {
  Eigen::MatrixXd r(3, 2);
  r << 1, 0, 0, 1, 1, 1;
  Operator op = catalog("div_form", {.n = 2, .R = r});
  ScalarReduction red = reduce_scalar_operator(op);
  REQUIRE(red.rows == std::vector<int>{0, 1});
  CHECK((red.R - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);
  CHECK(red.c_upper == Catch::Approx(2.0).margin(1e-12));
  CHECK(red.c_upper <= std::sqrt(2.0) * std::sqrt(3.0) + 1e-12);
  CHECK(red.verified);
}

TEST_CASE("scalar reduction rejects rank-deficient row systems") {
  Eigen::MatrixXd r(3, 2);
  r << 1, 0, 2, 0, -1, 0;
  Operator op = catalog("div_form", {.n = 2, .R = r});
  CHECK_THROWS_AS(reduce_scalar_operator(op), NotEllipticError);
}

TEST_CASE("random elliptic scalar operators reduce and dominate") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 2);
    const int m = n + static_cast<int>(rng() % (7 - n));
    Eigen::MatrixXd r(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) r(i, j) = g(rng);
    Operator op = catalog("div_form", {.n = n, .R = r});
    ScalarReduction red = reduce_scalar_operator(op, {}, trial);
    CHECK(static_cast<int>(red.rows.size()) == n);
    CHECK(numeric_rank(red.R) == n);
    CHECK(red.verified);
  }
}

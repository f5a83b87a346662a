#include <symlab/catalog.hpp>
#include <symlab/slice.hpp>

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

// |<a, b>| for unit vectors; 1 iff equal up to sign
double alignment(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::abs(a.normalized().dot(b.normalized()));
}

}  // namespace

// Oracle for the symmetric-gradient slice at (e1, e1), n = 2, derived by hand:
// target coordinates are indexed (2,0), (1,1), (0,2); the witness matrix of w
// is [[w1, w2], [w2, w3]], Y misses exactly the (2,2) matrix entry, so
// X = {w3 = 0} and W = span{(0,0,1)}.  The restricted operator is the 1-D
// derivative of the e2 component.
TEST_CASE("symgrad n=2 slice at (e1, e1) matches the hand computation", "[slice]") {
  Operator op = catalog("symgrad", {.n = 2});
  SliceOperator s = build_slice(op, Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 0));

  REQUIRE(s.Ve.dim() == 1);
  CHECK(alignment(s.domain.col(0), Eigen::Vector2d(0, 1)) == Catch::Approx(1.0));

  REQUIRE(s.Y.dim() == 3);
  REQUIRE(s.X.dim() == 2);
  REQUIRE(s.Wxe.dim() == 1);
  CHECK(alignment(s.target.col(0), Eigen::Vector3d(0, 0, 1)) == Catch::Approx(1.0));
  CHECK(s.X.dim() + s.Wxe.dim() == op.dimW);

  REQUIRE(s.restricted.n == 1);
  REQUIRE(s.restricted.dimV == 1);
  REQUIRE(s.restricted.dimW == 1);
  CHECK(std::abs(s.restricted.coeffs[0](0, 0)) == Catch::Approx(1.0));

  CHECK(alignment(s.hyperplane.col(0), Eigen::Vector2d(0, 1)) == Catch::Approx(1.0));
  CHECK(s.fit_residual <= 1e-10);
}

// Gradient n=2, N=2 at (e1, e1): the witness map is the identity, Y is the
// span of three matrix units, and only the e2(x)e2 unit survives.
TEST_CASE("gradient n=2 N=2 slice at (e1, e1) keeps only the (2,2) entry", "[slice]") {
  Operator op = catalog("gradient", {.n = 2, .N = 2});
  SliceOperator s = build_slice(op, Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 0));

  REQUIRE(s.Wxe.dim() == 1);
  Eigen::VectorXd unit22 = Eigen::VectorXd::Zero(4);
  unit22(3) = 1;  // flattened index 1*2+1
  CHECK(alignment(s.target.col(0), unit22) == Catch::Approx(1.0));
  CHECK(std::abs(s.restricted.coeffs[0](0, 0)) == Catch::Approx(1.0));
}

// Scalar gradient (dimV = 1): V_e = V and Y = span{xi (x) e} only.
TEST_CASE("scalar gradient n=2 slice at (e1, 1)", "[slice]") {
  Operator op = catalog("gradient", {.n = 2, .N = 1});
  Eigen::VectorXd e(1);
  e << 1;
  SliceOperator s = build_slice(op, Eigen::Vector2d(1, 0), e);

  CHECK(s.Ve.dim() == 1);
  REQUIRE(s.Y.dim() == 1);
  CHECK(alignment(s.Y.basis.col(0), Eigen::Vector2d(1, 0)) == Catch::Approx(1.0));
  REQUIRE(s.Wxe.dim() == 1);
  CHECK(alignment(s.target.col(0), Eigen::Vector2d(0, 1)) == Catch::Approx(1.0));
  CHECK(std::abs(s.restricted.coeffs[0](0, 0)) == Catch::Approx(1.0));
}

TEST_CASE("build_slice rejects bad input", "[slice]") {
  Operator op = catalog("symgrad", {.n = 2});
  CHECK_THROWS_AS(build_slice(op, Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0)),
                  std::invalid_argument);
  // (e1, e2) is not a spectral pair of the symmetric gradient
  CHECK_THROWS_AS(build_slice(op, Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)),
                  std::invalid_argument);
  // the deviatoric operator has no pairs at all
  Operator dev = catalog("deviatoric", {.n = 2});
  CHECK_THROWS_AS(build_slice(dev, Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 0)),
                  std::invalid_argument);
  // second order rejected
  Operator lap = catalog("laplacian", {.n = 2});
  CHECK_THROWS_AS(build_slice(lap, Eigen::Vector2d(1, 0), Eigen::VectorXd::Ones(1).eval()),
                  std::invalid_argument);
}

// Hand-counted dimensions for symgrad n=3: the witness matrices are the
// symmetric 3x3, Y covers first row plus first column, leaving the lower
// right 2x2 symmetric block: dim W = 3.
TEST_CASE("symgrad n=3 slice properties at (e1, e1)", "[slice]") {
  Operator op = catalog("symgrad", {.n = 3});
  SlicePropertyReport rep = check_slice_properties(op, Eigen::Vector3d(1, 0, 0),
                                                   Eigen::Vector3d(1, 0, 0), small_budget());

  CHECK(rep.slice.Ve.dim() == 2);
  CHECK(rep.slice.Wxe.dim() == 3);
  CHECK(rep.slice.X.dim() + rep.slice.Wxe.dim() == op.dimW);

  CHECK(rep.vanish_residual <= 1e-10);
  CHECK(rep.restriction_residual <= 1e-10);
  CHECK(rep.invariance_residual <= 1e-10);

  CHECK(rep.slice_real.verdict == Verdict::Yes);
  CHECK(rep.slice_real.constant > 0.1);
  CHECK(rep.slice_complex.verdict == Verdict::Yes);
  CHECK(rep.real_transfer_ok);
  CHECK(rep.complex_transfer_ok);

  REQUIRE(rep.slice_mixing_applicable);
  CHECK(rep.slice_mixing.verdict == SearchVerdict::Verified);
  CHECK(rep.mapped_pairs > 0);
  CHECK(rep.containment_residual <= 1e-8);
  CHECK(rep.ok);
}

// Gradient n=3, N=3 at (e1, e1): Y has dimension n + N - 1 = 5, the witness
// map is the identity on R^9, so dim W = 4.
TEST_CASE("gradient n=3 N=3 slice properties at (e1, e1)", "[slice]") {
  Operator op = catalog("gradient", {.n = 3, .N = 3});
  SlicePropertyReport rep = check_slice_properties(op, Eigen::Vector3d(1, 0, 0),
                                                   Eigen::Vector3d(1, 0, 0), small_budget());

  CHECK(rep.slice.Y.dim() == 5);
  CHECK(rep.slice.Wxe.dim() == 4);
  CHECK(rep.slice_real.verdict == Verdict::Yes);
  CHECK(rep.slice_real.constant > 0.1);
  REQUIRE(rep.slice_mixing_applicable);
  CHECK(rep.slice_mixing.verdict == SearchVerdict::Verified);
  CHECK(rep.containment_residual <= 1e-8);
  CHECK(rep.ok);
}

TEST_CASE("random gradient slices pass the audit", "[slice][property]") {
  Operator op = catalog("gradient", {.n = 3, .N = 2});
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd xi = random_unit_vector(3, rng);
    Eigen::VectorXd e = random_unit_vector(2, rng);
    SliceOperator s = build_slice(op, xi, e);
    CHECK(s.X.dim() + s.Wxe.dim() == op.dimW);
    CHECK(s.Wxe.dim() == 2);  // nN - (n + N - 1) = (n-1)(N-1) for the full gradient
    EllipticityResult ell = ellipticity_constant(s.restricted, small_budget());
    CHECK(ell.verdict == Verdict::Yes);
  }
}

TEST_CASE("transversal pair of the symgrad slice is (e2, e2) up to sign", "[slice]") {
  Operator op = catalog("symgrad", {.n = 2});
  SpectralPair p = find_transversal_pair(op, Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 0),
                                         small_budget());
  CHECK(alignment(p.xi, Eigen::Vector2d(0, 1)) == Catch::Approx(1.0));
  CHECK(alignment(p.coordinate, Eigen::Vector2d(0, 1)) == Catch::Approx(1.0));
  CHECK(p.residual <= 1e-8);
  // the mapped pair must also re-validate through an independent fit
  CHECK(witness_for_pair(op, p.xi, p.coordinate).residual <= 1e-8);
}

TEST_CASE("polarization of symgrad pairs (e1,e1), (e2,e2) forces t = 1", "[slice]") {
  Operator op = catalog("symgrad", {.n = 2});
  PolarizationResult res = polarize(op, Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 0),
                                    Eigen::Vector2d(0, 1), Eigen::Vector2d(0, 1));
  CHECK(res.t == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(res.v.size() == 2);
  CHECK(res.v(0) == Catch::Approx(0.0).margin(1e-12));
  CHECK(res.v(1) == Catch::Approx(1.0).margin(1e-12));
  CHECK(res.residual_plus <= 1e-8);
  CHECK(res.residual_minus <= 1e-8);

  // both polarized pairs validate as honest spectral pairs
  Eigen::Vector2d xp(1, 1), xm(1, -1), cp(1, 1), cm(1, -1);
  CHECK(pair_residual(op, res.witness_plus, xp, cp) <= 1e-8);
  CHECK(pair_residual(op, res.witness_minus, xm, cm) <= 1e-8);
}

TEST_CASE("polarization of the full gradient returns the smallest grid t", "[slice]") {
  Operator op = catalog("gradient", {.n = 2, .N = 2});
  PolarizationResult res = polarize(op, Eigen::Vector2d(1, 0), Eigen::Vector2d(1, 0),
                                    Eigen::Vector2d(0, 1), Eigen::Vector2d(0, 1));
  // every t is admissible for the gradient; the scan starts at +1e-6
  CHECK(res.t == Catch::Approx(1e-6));
  CHECK(res.residual_plus <= 1e-8);
  CHECK(res.residual_minus <= 1e-8);
}

TEST_CASE("polarize validates its inputs", "[slice]") {
  Operator op = catalog("symgrad", {.n = 2});
  Eigen::Vector2d e1(1, 0), e2(0, 1), diag(1, 1);
  CHECK_THROWS_AS(polarize(op, e1, e1, diag, diag), std::invalid_argument);  // not orthogonal
  CHECK_THROWS_AS(polarize(op, e1, e1, e2, e1), std::invalid_argument);      // f not in (V_e)*
  CHECK_THROWS_AS(polarize(op, e1, e2, e2, e1), std::invalid_argument);      // bad input pair
  Operator dev = catalog("deviatoric", {.n = 2});
  CHECK_THROWS_AS(polarize(dev, e1, e1, e2, e2), std::invalid_argument);     // no pairs at all
}

#include <symlab/catalog.hpp>
#include <symlab/json_io.hpp>
#include <symlab/verify.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

using namespace symlab;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("operator round trip preserves coefficients exactly") {
  const std::vector<Operator> ops{
      catalog("gradient", {.n = 2, .N = 2}),
      catalog("symgrad", {.n = 3}),
      catalog("laplacian", {.n = 2}),
      catalog("scrDk", {.n = 2, .k = 3}),
      catalog("divcurl", {.n = 3}),
  };
  for (const Operator& op : ops) {
    const std::string text = operator_to_json(op).dump();
    const Operator back = operator_from_json(parse_json_text(text, "roundtrip"));
    CHECK(back.n == op.n);
    CHECK(back.dimV == op.dimV);
    CHECK(back.dimW == op.dimW);
    CHECK(back.order == op.order);
    CHECK(back.name == op.name);
    REQUIRE(back.alphas == op.alphas);
    for (std::size_t a = 0; a < op.alphas.size(); ++a)
      CHECK(back.coeffs[a] == op.coeffs[a]);  // doubles survive serialization
  }
}

TEST_CASE("operator JSON layout is row-major dimW x dimV") {
  const std::string text = R"({
    "n": 2, "dimV": 2, "dimW": 2, "order": 1,
    "coeffs": [
      {"alpha": [1, 0], "matrix": [[1, 2], [3, 4]]},
      {"alpha": [0, 1], "matrix": [[0, 0], [5, 0]]}
    ]
  })";
  const Operator op = operator_from_json(parse_json_text(text, "inline"));
  CHECK(op.coeff({1, 0})(0, 1) == 2.0);
  CHECK(op.coeff({1, 0})(1, 0) == 3.0);
  CHECK(op.coeff({0, 1})(1, 0) == 5.0);
  const Eigen::MatrixXd s = symbol_eval(op, vec({0, 1}));
  CHECK(s(1, 0) == 5.0);
  CHECK(s(0, 0) == 0.0);
}

TEST_CASE("operator JSON rejects malformed input") {
  auto parse = [](const std::string& text) {
    return operator_from_json(parse_json_text(text, "bad"));
  };
  CHECK_THROWS_AS(parse(R"({"dimV":1,"dimW":1,"order":1,"coeffs":[]})"), std::invalid_argument);
  CHECK_THROWS_AS(
      parse(R"({"n":2,"dimV":1,"dimW":1,"order":1,"coeffs":[{"alpha":[1],"matrix":[[1]]}]})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      parse(
          R"({"n":2,"dimV":1,"dimW":1,"order":2,"coeffs":[{"alpha":[1,0],"matrix":[[1]]}]})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      parse(
          R"({"n":2,"dimV":2,"dimW":1,"order":1,"coeffs":[{"alpha":[1,0],"matrix":[[1]]}]})"),
      std::invalid_argument);
  CHECK_THROWS_AS(
      parse(
          R"({"n":2,"dimV":2,"dimW":2,"order":1,"coeffs":[{"alpha":[1,0],"matrix":[[1,2],[3]]}]})"),
      std::invalid_argument);
}

TEST_CASE("field round trip preserves the measure") {
  SyntheticField f;
  f.n = 2;
  f.dimV = 2;
  BVProfile1D mixed;
  mixed.ac.push_back({0.05, 0.95, Poly({1, 1})});
  mixed.jumps.push_back({0.5, 0.7});
  mixed.cantor.push_back({0, 1, 0.3});
  f.terms.push_back({vec({1, 0}), vec({1, 0}), mixed});
  const double r = 1.0 / std::sqrt(2.0);
  BVProfile1D smooth;
  smooth.ac.push_back({-0.5, 1.6, Poly({2, -1, 0.25})});
  f.terms.push_back({vec({r, r}), vec({0.2, -0.4}), smooth});
  f.box = {{0, 1}, {0, 1}};
  validate_field(f);

  const std::string text = field_to_json(f).dump();
  const SyntheticField back = field_from_json(parse_json_text(text, "roundtrip"));
  REQUIRE(back.terms.size() == f.terms.size());
  CHECK(back.terms[0].nu == f.terms[0].nu);
  CHECK(back.terms[1].b == f.terms[1].b);
  REQUIRE(back.box.size() == 2);

  const Operator sg = catalog("symgrad", {.n = 2});
  const MeasureRep rep_a = apply_operator_analytic(sg, f);
  const MeasureRep rep_b = apply_operator_analytic(sg, back);
  for (Part part : {Part::ac, Part::jump, Part::cantor})
    CHECK(measure_on_box(rep_a, f.box, part) == measure_on_box(rep_b, back.box, part));
}

TEST_CASE("field JSON accepts the documented schema") {
  const std::string text = R"({
    "n": 2, "dimV": 1,
    "terms": [
      {"nu": [1.0, 0.0], "b": [1.0],
       "profile": {"ac": [], "jumps": [[0.5, 1.0]], "cantor": []}}
    ],
    "box": [[0.0, 1.0], [0.0, 1.0]]
  })";
  const SyntheticField f = field_from_json(parse_json_text(text, "step"));
  REQUIRE(f.terms.size() == 1);
  CHECK(f.terms[0].profile.jumps.size() == 1);
  CHECK(f.terms[0].profile.ac.empty());
  CHECK(f.box[1].hi == 1.0);

  // a term with a non-unit direction is refused
  const std::string bad = R"({
    "n": 2, "dimV": 1,
    "terms": [{"nu": [1.0, 1.0], "b": [1.0], "profile": {"jumps": [[0.5, 1.0]]}}],
    "box": [[0.0, 1.0], [0.0, 1.0]]
  })";
  CHECK_THROWS_AS(field_from_json(parse_json_text(bad, "bad")), std::invalid_argument);
}

TEST_CASE("parse errors carry line and column") {
  const std::string text = "{\n  \"n\": 2,,\n}";
  try {
    parse_json_text(text, "input.json");
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("input.json:2:") != std::string::npos);
  }
}

TEST_CASE("atomic file writes") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "symlab_json_io_test";
  fs::create_directories(dir);
  const std::string path = (dir / "report.json").string();

  write_file_atomic(path, "{\"a\":1}");
  write_file_atomic(path, "{\"a\":2}");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "{\"a\":2}");
  CHECK_FALSE(fs::exists(path + ".tmp"));
  fs::remove_all(dir);
}

TEST_CASE("report envelope is ordered and deterministic") {
  json_t result;
  result["value"] = 0.125;
  const json_t a = make_report("classify", 7, Budget{}, Tolerances{}, result);
  const json_t b = make_report("classify", 7, Budget{}, Tolerances{}, result);
  CHECK(a.dump() == b.dump());
  const std::string text = a.dump();
  CHECK(text.rfind("{\"schema_version\":1,\"command\":\"classify\",\"seed\":7,", 0) == 0);
  CHECK(a.at("budget").at("random_directions") == 128);
  CHECK(a.at("tolerances").at("residual_tol") == 1e-8);
}

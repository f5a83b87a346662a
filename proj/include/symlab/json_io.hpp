#pragma once

// JSON encoding of operators, synthetic fields, and report envelopes, plus
// the small amount of file plumbing (parse with positions, atomic writes)
// shared by the command-line tool and the tests.

#include <symlab/classify.hpp>
#include <symlab/operator.hpp>
#include <symlab/synthetic_field.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace symlab {

// Insertion-ordered throughout so that semantically identical runs serialize
// to identical bytes.
using json_t = nlohmann::ordered_json;

inline json_t json_vector(const Eigen::VectorXd& v) {
  json_t a = json_t::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline json_t json_matrix_rows(const Eigen::MatrixXd& m) {
  json_t rows = json_t::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json_t row = json_t::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Eigen::VectorXd vector_from_json(const json_t& j, const std::string& what) {
  if (!j.is_array()) throw std::invalid_argument(what + ": expected an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  Eigen::Index i = 0;
  for (const auto& x : j) {
    if (!x.is_number()) throw std::invalid_argument(what + ": expected an array of numbers");
    v[i++] = x.get<double>();
  }
  return v;
}

inline Eigen::MatrixXd matrix_from_json(const json_t& j, const std::string& what) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument(what + ": expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Eigen::VectorXd row = vector_from_json(j[static_cast<std::size_t>(r)], what);
    if (r == 0)
      m.resize(rows, row.size());
    else if (row.size() != m.cols())
      throw std::invalid_argument(what + ": ragged rows");
    m.row(r) = row;
  }
  return m;
}

namespace detail {

inline const json_t& require_key(const json_t& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key))
    throw std::invalid_argument(std::string(what) + ": missing key \"" + key + "\"");
  return j.at(key);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Operators:
// { "n", "dimV", "dimW", "order", "coeffs": [ { "alpha": [...], "matrix":
//   [[row],...] }, ... ] }, matrices dimW x dimV, row-major.  Zero blocks may
// be omitted.  "name" is carried when present.

inline json_t operator_to_json(const Operator& op) {
  json_t j;
  j["n"] = op.n;
  j["dimV"] = op.dimV;
  j["dimW"] = op.dimW;
  j["order"] = op.order;
  if (!op.name.empty()) j["name"] = op.name;
  json_t coeffs = json_t::array();
  for (std::size_t a = 0; a < op.alphas.size(); ++a) {
    if (op.coeffs[a].squaredNorm() == 0) continue;
    json_t entry;
    entry["alpha"] = op.alphas[a];
    entry["matrix"] = json_matrix_rows(op.coeffs[a]);
    coeffs.push_back(std::move(entry));
  }
  j["coeffs"] = std::move(coeffs);
  return j;
}

inline Operator operator_from_json(const json_t& j) {
  for (const char* key : {"n", "dimV", "dimW", "order", "coeffs"})
    detail::require_key(j, key, "operator JSON");
  Operator op = make_operator(j.at("n").get<int>(), j.at("dimV").get<int>(),
                              j.at("dimW").get<int>(), j.at("order").get<int>(),
                              j.value("name", std::string{}));
  const json_t& coeffs = j.at("coeffs");
  if (!coeffs.is_array()) throw std::invalid_argument("operator JSON: coeffs must be an array");
  for (const auto& entry : coeffs) {
    const json_t& alpha_json = detail::require_key(entry, "alpha", "operator JSON coeff");
    MultiIndex alpha;
    for (const auto& x : alpha_json) {
      if (!x.is_number_integer())
        throw std::invalid_argument("operator JSON coeff: alpha must hold integers");
      alpha.push_back(x.get<int>());
    }
    if (static_cast<int>(alpha.size()) != op.n)
      throw std::invalid_argument("operator JSON coeff: alpha length must equal n");
    if (multi_index_order(alpha) != op.order)
      throw std::invalid_argument("operator JSON coeff: |alpha| must equal the order");
    const Eigen::MatrixXd m =
        matrix_from_json(detail::require_key(entry, "matrix", "operator JSON coeff"),
                         "operator JSON coeff matrix");
    if (m.rows() != op.dimW || m.cols() != op.dimV)
      throw std::invalid_argument("operator JSON coeff: matrix must be dimW x dimV");
    op.coeff(alpha) = m;
  }
  validate_operator(op);
  return op;
}

// ---------------------------------------------------------------------------
// Synthetic fields:
// { "n", "dimV", "terms": [ { "nu": [...], "b": [...], "profile": {
//   "ac": [[lo, hi, [c0, c1, ...]], ...], "jumps": [[t, h], ...],
//   "cantor": [[lo, hi, amplitude], ...] } } ], "box": [[lo, hi], ...] }.
// Densities are polynomial coefficients in ascending degree.

inline json_t field_to_json(const SyntheticField& f) {
  json_t j;
  j["n"] = f.n;
  j["dimV"] = f.dimV;
  json_t terms = json_t::array();
  for (const FieldTerm& term : f.terms) {
    json_t t;
    t["nu"] = json_vector(term.nu);
    t["b"] = json_vector(term.b);
    json_t prof;
    json_t ac = json_t::array();
    for (const AcPiece& piece : term.profile.ac)
      ac.push_back(json_t::array({piece.lo, piece.hi, piece.density.c}));
    prof["ac"] = std::move(ac);
    json_t jumps = json_t::array();
    for (const JumpAtom& atom : term.profile.jumps)
      jumps.push_back(json_t::array({atom.t, atom.h}));
    prof["jumps"] = std::move(jumps);
    json_t cantor = json_t::array();
    for (const CantorComponent& comp : term.profile.cantor)
      cantor.push_back(json_t::array({comp.lo, comp.hi, comp.amplitude}));
    prof["cantor"] = std::move(cantor);
    t["profile"] = std::move(prof);
    terms.push_back(std::move(t));
  }
  j["terms"] = std::move(terms);
  json_t box = json_t::array();
  for (const Interval& side : f.box) box.push_back(json_t::array({side.lo, side.hi}));
  j["box"] = std::move(box);
  return j;
}

inline SyntheticField field_from_json(const json_t& j) {
  for (const char* key : {"n", "dimV", "terms", "box"}) detail::require_key(j, key, "field JSON");
  SyntheticField f;
  f.n = j.at("n").get<int>();
  f.dimV = j.at("dimV").get<int>();
  const json_t& terms = j.at("terms");
  if (!terms.is_array()) throw std::invalid_argument("field JSON: terms must be an array");
  for (const auto& t : terms) {
    FieldTerm term;
    term.nu = vector_from_json(detail::require_key(t, "nu", "field JSON term"), "field term nu");
    term.b = vector_from_json(detail::require_key(t, "b", "field JSON term"), "field term b");
    const json_t& prof = detail::require_key(t, "profile", "field JSON term");
    if (prof.contains("ac"))
      for (const auto& piece : prof.at("ac")) {
        if (!piece.is_array() || piece.size() != 3)
          throw std::invalid_argument("field JSON: ac pieces are [lo, hi, [coeffs...]]");
        const Eigen::VectorXd c = vector_from_json(piece[2], "field ac density");
        term.profile.ac.push_back(
            {piece[0].get<double>(), piece[1].get<double>(),
             Poly(std::vector<double>(c.data(), c.data() + c.size()))});
      }
    if (prof.contains("jumps"))
      for (const auto& atom : prof.at("jumps")) {
        if (!atom.is_array() || atom.size() != 2)
          throw std::invalid_argument("field JSON: jumps are [t, h]");
        term.profile.jumps.push_back({atom[0].get<double>(), atom[1].get<double>()});
      }
    if (prof.contains("cantor"))
      for (const auto& comp : prof.at("cantor")) {
        if (!comp.is_array() || comp.size() != 3)
          throw std::invalid_argument("field JSON: cantor components are [lo, hi, amplitude]");
        term.profile.cantor.push_back(
            {comp[0].get<double>(), comp[1].get<double>(), comp[2].get<double>()});
      }
    f.terms.push_back(std::move(term));
  }
  const json_t& box = j.at("box");
  if (!box.is_array()) throw std::invalid_argument("field JSON: box must be an array of [lo, hi]");
  for (const auto& side : box) {
    if (!side.is_array() || side.size() != 2)
      throw std::invalid_argument("field JSON: box sides are [lo, hi]");
    f.box.push_back({side[0].get<double>(), side[1].get<double>()});
  }
  validate_field(f);
  return f;
}

// ---------------------------------------------------------------------------
// Files and reports

inline json_t parse_json_text(const std::string& text, const std::string& source) {
  try {
    return json_t::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::ostringstream msg;
    msg << source << ":" << line << ":" << col << ": " << e.what();
    throw std::runtime_error(msg.str());
  }
}

inline json_t load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str(), path);
}

// Write through a sibling temp file and rename, so readers never observe a
// partial report.
inline void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  fs::rename(tmp, target);
}

inline json_t budget_to_json(const Budget& b) {
  json_t j;
  j["sphere_samples"] = b.sphere_samples;
  j["random_directions"] = b.random_directions;
  j["restarts"] = b.restarts;
  j["refine_starts"] = b.refine_starts;
  return j;
}

inline json_t tolerances_to_json(const Tolerances& t) {
  json_t j;
  j["rank_tol"] = t.rank_tol;
  j["residual_tol"] = t.residual_tol;
  return j;
}

// Reproducibility envelope shared by every CLI report.
inline json_t make_report(const std::string& command, std::uint64_t seed, const Budget& budget,
                          const Tolerances& tol, json_t result) {
  json_t j;
  j["schema_version"] = 1;
  j["command"] = command;
  j["seed"] = seed;
  j["budget"] = budget_to_json(budget);
  j["tolerances"] = tolerances_to_json(tol);
  j["result"] = std::move(result);
  return j;
}

}  // namespace symlab

#pragma once

// JSON model specs and tensor serialization. Complex numbers are two-element
// [re, im] arrays; matrices are arrays of rows.
//
// Representation spec:
//   {"builtin": "su2", "spin": 0.5}
//   {"builtin": "heisenberg", "modes": 1, "cutoff": 16}
//   {"generators": [matrix...], "structure_constants": [[[...]]], "multiplier_form": [[...]]}
//     structure_constants[r][j][k] = c_r^{jk}
// Hamiltonian spec:
//   {"affine": {"h0": matrix, "terms": [matrix...]}}
//   {"builtin": "bloch"}
//   {"builtin": "landau_zener", "delta": 1.0}

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qpt/grid.hpp"
#include "qpt/qgt.hpp"
#include "qpt/weyl.hpp"

namespace qpt::io {

using nlohmann::json;

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const ComplexVector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(to_json(v[i]));
  return a;
}

inline json to_json(const RealVector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline json to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json to_json(const RealMatrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) throw SpecError(path, "expected a number");
  return j.get<double>();
}

inline Complex complex_at(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw SpecError(path, "expected a complex number [re, im]");
  return {number_at(j[0], path + "/0"), number_at(j[1], path + "/1")};
}

inline ComplexVector complex_vector_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SpecError(path, "expected a non-empty array of complex numbers");
  ComplexVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Index>(i)] = complex_at(j[i], path + "/" + std::to_string(i));
  return v;
}

inline RealVector real_vector_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SpecError(path, "expected a non-empty array of numbers");
  RealVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Index>(i)] = number_at(j[i], path + "/" + std::to_string(i));
  return v;
}

inline ComplexMatrix complex_matrix_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SpecError(path, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  ComplexMatrix m(static_cast<Index>(rows), static_cast<Index>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = path + "/" + std::to_string(r);
    if (!j[r].is_array() || j[r].size() != rows) throw SpecError(rp, "expected a square matrix");
    for (std::size_t c = 0; c < rows; ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) = complex_at(j[r][c], rp + "/" + std::to_string(c));
  }
  return m;
}

inline RealMatrix real_matrix_at(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SpecError(path, "expected a non-empty array of rows");
  const std::size_t rows = j.size();
  RealMatrix m(static_cast<Index>(rows), static_cast<Index>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string rp = path + "/" + std::to_string(r);
    if (!j[r].is_array() || j[r].size() != rows) throw SpecError(rp, "expected a square matrix");
    for (std::size_t c = 0; c < rows; ++c)
      m(static_cast<Index>(r), static_cast<Index>(c)) = number_at(j[r][c], rp + "/" + std::to_string(c));
  }
  return m;
}

inline const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) throw SpecError(path + "/" + key, "required field missing");
  return j[key];
}

inline Index count_at(const json& j, const std::string& path) {
  if (!j.is_number_integer() && !(j.is_number() && j.get<double>() == static_cast<double>(static_cast<Index>(j.get<double>())))) {
    throw SpecError(path, "expected an integer");
  }
  return static_cast<Index>(j.get<double>());
}

// Re-raises library argument errors as spec errors at `path`.
template <class F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SpecError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw SpecError(path, e.what());
  } catch (const DimensionError& e) {
    throw SpecError(path, e.what());
  }
}

inline LieAlgebraRep parse_rep(const json& j, const std::string& path = "/rep") {
  if (!j.is_object()) throw SpecError(path, "expected an object");
  if (j.contains("builtin")) {
    const auto& b = j["builtin"];
    if (!b.is_string()) throw SpecError(path + "/builtin", "expected a string");
    const std::string name = b.get<std::string>();
    if (name == "su2") {
      const double s = number_at(member(j, "spin", path), path + "/spin");
      return at_path(path + "/spin", [&] { return su2_spin_rep(s); });
    }
    if (name == "heisenberg") {
      const Index modes = count_at(member(j, "modes", path), path + "/modes");
      const Index cutoff = count_at(member(j, "cutoff", path), path + "/cutoff");
      return at_path(path, [&] { return heisenberg_rep(modes, cutoff); });
    }
    throw SpecError(path + "/builtin", "unknown builtin representation '" + name + "'");
  }
  const json& gens = member(j, "generators", path);
  if (!gens.is_array() || gens.empty()) throw SpecError(path + "/generators", "expected a non-empty array of matrices");
  std::vector<ComplexMatrix> g;
  for (std::size_t i = 0; i < gens.size(); ++i) g.push_back(complex_matrix_at(gens[i], path + "/generators/" + std::to_string(i)));
  const Index n = static_cast<Index>(g.size());
  StructureConstants c(n);
  if (j.contains("structure_constants")) {
    const std::string cp = path + "/structure_constants";
    const json& cj = j["structure_constants"];
    if (!cj.is_array() || static_cast<Index>(cj.size()) != n) throw SpecError(cp, "expected n arrays of n x n");
    for (Index r = 0; r < n; ++r) {
      const RealMatrix cr = real_matrix_at(cj[static_cast<std::size_t>(r)], cp + "/" + std::to_string(r));
      if (cr.rows() != n) throw SpecError(cp + "/" + std::to_string(r), "expected an n x n block");
      for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b) c(r, a, b) = cr(a, b);
    }
  }
  std::optional<RealMatrix> omega;
  if (j.contains("multiplier_form")) omega = real_matrix_at(j["multiplier_form"], path + "/multiplier_form");
  return at_path(path, [&] { return LieAlgebraRep("custom", std::move(g), std::move(c), std::move(omega)); });
}

struct ParsedHamiltonian {
  HamiltonianFamily family;
  std::vector<std::string> coordinates;
};

inline ParsedHamiltonian parse_hamiltonian(const json& j, const std::string& path = "/hamiltonian") {
  if (!j.is_object()) throw SpecError(path, "expected an object");
  if (j.contains("builtin")) {
    const auto& b = j["builtin"];
    if (!b.is_string()) throw SpecError(path + "/builtin", "expected a string");
    const std::string name = b.get<std::string>();
    if (name == "bloch") return {bloch_family(), {"theta", "phi"}};
    if (name == "landau_zener") {
      const double delta = j.contains("delta") ? number_at(j["delta"], path + "/delta") : 1.0;
      return {landau_zener_family(delta), {"lambda"}};
    }
    throw SpecError(path + "/builtin", "unknown builtin Hamiltonian '" + name + "'");
  }
  const std::string ap = path + "/affine";
  const json& a = member(j, "affine", path);
  const ComplexMatrix h0 = complex_matrix_at(member(a, "h0", ap), ap + "/h0");
  const json& terms = member(a, "terms", ap);
  if (!terms.is_array() || terms.empty()) throw SpecError(ap + "/terms", "expected a non-empty array of matrices");
  std::vector<ComplexMatrix> t;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    t.push_back(complex_matrix_at(terms[i], ap + "/terms/" + std::to_string(i)));
    names.push_back("l" + std::to_string(i + 1));
  }
  return {at_path(ap, [&] { return HamiltonianFamily::affine(h0, std::move(t)); }), std::move(names)};
}

// Matrix readers for emitted records.
inline RealMatrix read_real_matrix(const json& j) { return real_matrix_at(j, "/"); }
inline ComplexMatrix read_complex_matrix(const json& j) { return complex_matrix_at(j, "/"); }

}  // namespace qpt::io

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace qpt {

struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// `residual <= tolerance`; NaN fails.
inline Check make_check(std::string name, double residual, double tolerance) {
  return {std::move(name), residual, tolerance, residual <= tolerance};
}

struct Report {
  std::vector<Check> checks;
  std::vector<std::string> notes;

  void add(std::string name, double residual, double tolerance) {
    checks.push_back(make_check(std::move(name), residual, tolerance));
  }
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

inline nlohmann::json conventions_json() {
  return {
      {"assembly", "T_jk theta_j (x) theta_k, real part metric, imaginary part 2-form"},
      {"wedge", "a^b = a(x)b - b(x)a"},
      {"symmetric", "a.b = a(x)b + b(x)a"},
      {"closure", "R_j R_k - R_k R_j = i c_r^{jk} R_r + i w_jk"},
      {"su2_generators", "R_j = 2 J_j (spin 1/2: Pauli matrices), c = 2 eps"},
      {"euler", "U = exp(i alpha R_3/2) exp(i beta R_2/2) exp(i gamma R_3/2)"},
      {"heisenberg", "R = (Q^1..Q^n, P^1..P^n), [Q, P] = i, w = [[0, I], [-I, 0]]"},
      {"qgt", "h_mn = <d_m psi|d_n psi> - <psi|d_n psi><d_m psi|psi>, berry_form = -2 Im h"},
  };
}

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  }
  nlohmann::json out = {{"type", "report"}, {"checks", checks}, {"pass", r.pass()}, {"conventions", conventions_json()}};
  if (!r.notes.empty()) out["notes"] = r.notes;
  return out;
}

}  // namespace qpt

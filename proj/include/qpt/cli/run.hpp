#pragma once

// Command-line front end: `group`, `weyl`, `qgt`, `verify`, `compare`.
//
// Output is JSON lines: one header object, one record per grid point (in grid
// order), then a report object when the mode runs checks. CSV is a flat
// export of the records only.
//
// Exit codes: 0 success, 2 spec error, 3 numerical refusal, 4 check failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpt/grid.hpp"
#include "qpt/io.hpp"
#include "qpt/parallel.hpp"
#include "qpt/report.hpp"
#include "qpt/verify.hpp"

namespace qpt::cli {

using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitSpecError = 2;
inline constexpr int kExitRefusal = 3;
inline constexpr int kExitCheckFailed = 4;

enum class Mode { group, weyl, qgt, verify };
enum class Format { jsonl, csv };

struct Tolerances {
  std::optional<double> check_tol;  // overrides every check tolerance when set
  double fd_step = kDefaultFdStep;
  double degeneracy_tol = QGTOptions{}.degeneracy_tol;
};

struct RunSpec {
  Mode mode = Mode::group;
  json model = json::object();  // contents of --spec, if any
  std::optional<std::string> grid;
  bool projective = false;
  std::optional<std::string> frame;
  bool physical = false;
  std::optional<Index> modes;
  std::optional<Index> cutoff;
  std::optional<Index> level;
  std::optional<std::string> lagrangian;
  std::optional<std::string> module;
  Tolerances tol;
};

struct RunOutput {
  json header;
  std::vector<json> records;
  std::optional<Report> report;
};

namespace detail {

inline json restricted_complex(const ComplexMatrix& m, const Grid& grid) {
  return io::to_json(ComplexMatrix(grid.restrict(m.real()).cast<Complex>() + kI * grid.restrict(m.imag()).cast<Complex>()));
}

inline Grid grid_of(const RunSpec& spec, const std::vector<std::string>& names, bool required) {
  if (spec.grid) return parse_grid(*spec.grid, names);
  if (spec.model.contains("grid")) return parse_grid(spec.model["grid"], names);
  if (required) throw SpecError("/grid", "required field missing");
  std::vector<GridAxis> axes;
  for (const auto& n : names) axes.push_back({n, 0.0, 0.0, 1, true});
  return Grid(std::move(axes));
}

inline bool flag_or_model(bool flag, const json& model, const char* key) {
  if (flag) return true;
  if (!model.contains(key)) return false;
  if (!model[key].is_boolean()) throw SpecError(std::string("/") + key, "expected a boolean");
  return model[key].get<bool>();
}

inline std::optional<Index> index_or_model(std::optional<Index> flag, const json& model, const char* key) {
  if (flag) return flag;
  if (!model.contains(key)) return std::nullopt;
  return io::count_at(model[key], std::string("/") + key);
}

inline std::string string_or_model(const std::optional<std::string>& flag, const json& model, const char* key,
                                   std::string fallback) {
  if (flag) return *flag;
  if (!model.contains(key)) return fallback;
  if (!model[key].is_string()) throw SpecError(std::string("/") + key, "expected a string");
  return model[key].get<std::string>();
}

inline FrameSide parse_frame(const std::string& s) {
  if (s == "right") return FrameSide::right;
  if (s == "left") return FrameSide::left;
  throw SpecError("/frame", "expected 'right' or 'left', got '" + s + "'");
}

inline json grid_header(const Grid& g) {
  json axes = json::array();
  for (const auto& a : g.axes()) {
    axes.push_back({{"name", a.name}, {"start", a.start}, {"stop", a.stop}, {"count", a.count}, {"swept", a.swept}});
  }
  return axes;
}

inline RunOutput run_group(const RunSpec& spec) {
  const json& m = spec.model;
  const LieAlgebraRep rep = io::parse_rep(io::member(m, "rep", ""), "/rep");
  ComplexVector fiducial = ComplexVector::Unit(rep.dim(), 0);
  if (m.contains("fiducial")) {
    fiducial = io::complex_vector_at(m["fiducial"], "/fiducial");
    if (fiducial.size() != rep.dim()) {
      throw SpecError("/fiducial", "length " + std::to_string(fiducial.size()) + " does not match representation dimension " +
                                       std::to_string(rep.dim()));
    }
  }
  const bool projective = flag_or_model(spec.projective, m, "projective");
  const bool physical = flag_or_model(spec.physical, m, "physical");
  const FrameSide side = parse_frame(string_or_model(spec.frame, m, "frame", "right"));
  const std::string chart_name = string_or_model(std::nullopt, m, "chart", rep.label() == "su2" ? "su2_euler" : "exponential");
  std::optional<Chart> chart;
  if (chart_name == "su2_euler") {
    if (rep.size() != 3) throw SpecError("/chart", "su2_euler needs a three-generator representation");
    chart = Chart::su2_euler(side);
  } else if (chart_name == "exponential") {
    chart = Chart::exponential(rep, side);
  } else {
    throw SpecError("/chart", "unknown chart '" + chart_name + "'");
  }
  const Grid grid = grid_of(spec, chart->coordinates(), true);
  const PullbackTensor t = covariance_matrix(rep, fiducial, projective);
  const double scale = physical ? chart->generator_scale() * chart->generator_scale() : 1.0;

  RunOutput out;
  out.header = {{"type", "header"},
                {"mode", "group"},
                {"rep", m["rep"]},
                {"fiducial", io::to_json(fiducial)},
                {"projective", projective},
                {"chart", chart_name},
                {"frame", to_string(side)},
                {"scale", scale},
                {"coordinates", grid.swept_names()},
                {"grid", grid_header(grid)},
                {"coefficients", io::to_json(t.coefficients)},
                {"conventions", conventions_json()}};
  out.records = parallel_map(grid.size(), [&](Index i) {
    const RealVector x = grid.point(i);
    const CoordinateTensor ct = evaluate_at(t, chart->coframe(x));
    return json{{"type", "record"},
                {"index", i},
                {"point", io::to_json(RealVector(grid.swept_part(x)))},
                {"metric", io::to_json(RealMatrix(scale * grid.restrict(ct.metric)))},
                {"two_form", io::to_json(RealMatrix(scale * grid.restrict(ct.two_form)))}};
  });
  Report r;
  const auto& tol = spec.tol;
  r.add("coefficients_hermitian", hermiticity_defect(t.coefficients), tol.check_tol.value_or(1e-12));
  r.add("multiplier_consistency", multiplier_consistency(rep, fiducial), tol.check_tol.value_or(1e-10));
  if (projective) {
    r.add("metric_psd", std::max(0.0, -min_eigenvalue(t.coefficients.real())), tol.check_tol.value_or(1e-10));
  }
  out.report = r;
  return out;
}

inline std::vector<RealVector> parse_directions(const std::string& text, Index modes) {
  const Index n2 = 2 * modes;
  std::vector<RealVector> dirs;
  for (const auto& item : qpt::detail::split_on(text, ',')) {
    const std::string p = "/lagrangian/" + std::to_string(dirs.size());
    if (item.size() >= 2 && (item[0] == 'q' || item[0] == 'p') && item.find(':') == std::string::npos) {
      const double k = qpt::detail::parse_number(item.substr(1), p);
      if (k < 1 || k > static_cast<double>(modes) || k != std::floor(k)) throw SpecError(p, "mode index out of range");
      dirs.push_back(RealVector::Unit(n2, (item[0] == 'q' ? 0 : modes) + static_cast<Index>(k) - 1));
      continue;
    }
    const auto parts = qpt::detail::split_on(item, ':');
    if (static_cast<Index>(parts.size()) != n2) {
      throw SpecError(p, "expected q<k>, p<k>, or " + std::to_string(n2) + " colon-separated coefficients");
    }
    RealVector v(n2);
    for (Index i = 0; i < n2; ++i) v[i] = qpt::detail::parse_number(parts[static_cast<std::size_t>(i)], p);
    dirs.push_back(v);
  }
  return dirs;
}

inline RunOutput run_weyl(const RunSpec& spec) {
  const json& m = spec.model;
  const Index modes = index_or_model(spec.modes, m, "modes").value_or(1);
  const Index cutoff = index_or_model(spec.cutoff, m, "cutoff").value_or(16);
  if (modes < 1) throw SpecError("/modes", "must be positive");
  if (cutoff < 3) throw SpecError("/cutoff", "must be at least 3");
  const bool projective = flag_or_model(spec.projective, m, "projective");
  const WeylSystem w = build_weyl(modes, cutoff);
  PullbackTensor t = gaussian_covariance(w, projective);
  const Index n2 = 2 * modes;

  std::optional<std::string> lag_text = spec.lagrangian;
  if (!lag_text && m.contains("lagrangian")) {
    if (!m["lagrangian"].is_string()) throw SpecError("/lagrangian", "expected a string");
    lag_text = m["lagrangian"].get<std::string>();
  }
  RealMatrix expected_metric = 0.5 * RealMatrix::Identity(n2, n2);
  RealMatrix expected_form = 0.5 * w.symplectic_form();
  std::vector<std::string> names;
  if (lag_text) {
    const auto dirs = parse_directions(*lag_text, modes);
    t = io::at_path("/lagrangian", [&] { return lagrangian_restriction(t, dirs, w.symplectic_form()); });
    RealMatrix s(n2, static_cast<Index>(dirs.size()));
    for (std::size_t c = 0; c < dirs.size(); ++c) s.col(static_cast<Index>(c)) = dirs[c];
    expected_metric = 0.5 * s.transpose() * s;
    expected_form = RealMatrix::Zero(s.cols(), s.cols());
    for (std::size_t c = 0; c < dirs.size(); ++c) names.push_back("u" + std::to_string(c + 1));
  } else {
    for (Index k = 1; k <= modes; ++k) names.push_back("q" + std::to_string(k));
    for (Index k = 1; k <= modes; ++k) names.push_back("p" + std::to_string(k));
  }
  const Grid grid = grid_of(spec, names, false);

  RunOutput out;
  out.header = {{"type", "header"},
                {"mode", "weyl"},
                {"modes", modes},
                {"cutoff", cutoff},
                {"projective", projective},
                {"coordinates", grid.swept_names()},
                {"grid", grid_header(grid)},
                {"coefficients", io::to_json(t.coefficients)},
                {"conventions", conventions_json()}};
  if (lag_text) out.header["lagrangian"] = *lag_text;
  const RealMatrix metric = t.coefficients.real(), form = t.coefficients.imag();
  for (Index i = 0; i < grid.size(); ++i) {
    const RealVector x = grid.point(i);
    out.records.push_back({{"type", "record"},
                           {"index", i},
                           {"point", io::to_json(RealVector(grid.swept_part(x)))},
                           {"metric", io::to_json(RealMatrix(grid.restrict(metric)))},
                           {"two_form", io::to_json(RealMatrix(grid.restrict(form)))}});
  }
  const auto tol = [&](double d) { return spec.tol.check_tol.value_or(d); };
  Report r;
  r.add("metric_half_identity", (metric - expected_metric).cwiseAbs().maxCoeff(), tol(1e-14));
  r.add(lag_text ? "form_vanishes_on_lagrangian" : "form_half_omega", (form - expected_form).cwiseAbs().maxCoeff(),
        tol(1e-14));
  r.add("multiplier_consistency", multiplier_consistency(w.rep(), w.vacuum()), tol(1e-14));
  double quad = 0.0;
  const PullbackTensor full = gaussian_covariance(w, false);
  for (Index j = 0; j < modes; ++j)
    for (Index k = 0; k < modes; ++k)
      quad = std::max(quad, std::abs(gaussian_moment_oracle(j, k, modes, 64) - full.coefficients(j, k).real()));
  r.add("quadrature_moments", quad, tol(1e-10));
  out.report = r;
  return out;
}

inline RunOutput run_qgt(const RunSpec& spec) {
  const json& m = spec.model;
  const io::ParsedHamiltonian ham = io::parse_hamiltonian(io::member(m, "hamiltonian", ""), "/hamiltonian");
  const Index level = index_or_model(spec.level, m, "level").value_or(0);
  const Grid grid = grid_of(spec, ham.coordinates, true);
  const QGTOptions opts{spec.tol.degeneracy_tol};

  RunOutput out;
  out.header = {{"type", "header"},
                {"mode", "qgt"},
                {"hamiltonian", m["hamiltonian"]},
                {"level", level},
                {"coordinates", grid.swept_names()},
                {"grid", grid_header(grid)},
                {"conventions", conventions_json()}};
  struct PointResult {
    json record;
    double agreement;
    double psd;
  };
  const auto results = parallel_map(grid.size(), [&](Index i) {
    const RealVector x = grid.point(i);
    const QGTResult q = qgt_tensor(ham.family, x, level, opts);
    const QGTResult f = finite_difference_qgt(ham.family, x, level, spec.tol.fd_step, opts);
    json rec = {{"type", "record"},
                {"index", i},
                {"point", io::to_json(RealVector(grid.swept_part(x)))},
                {"h", restricted_complex(q.h, grid)},
                {"metric", io::to_json(RealMatrix(grid.restrict(q.metric)))},
                {"berry_form", io::to_json(RealMatrix(grid.restrict(q.berry_form)))},
                {"gap", q.gap}};
    return PointResult{std::move(rec), (q.h - f.h).cwiseAbs().maxCoeff(), std::max(0.0, -min_eigenvalue(q.metric))};
  });
  double agree = 0.0, psd = 0.0;
  for (const auto& p : results) {
    out.records.push_back(p.record);
    agree = std::max(agree, p.agreement);
    psd = std::max(psd, p.psd);
  }
  Report r;
  r.add("spectral_vs_finite_difference", agree, spec.tol.check_tol.value_or(1e-6));
  r.add("metric_psd", psd, spec.tol.check_tol.value_or(1e-10));
  out.report = r;
  return out;
}

inline RunOutput run_verify(const RunSpec& spec) {
  const json& m = spec.model;
  const std::string module = string_or_model(spec.module, m, "module", "");
  if (module.empty()) throw SpecError("/module", "required field missing");
  std::vector<std::string> names;
  std::optional<LieAlgebraRep> rep;
  std::optional<io::ParsedHamiltonian> ham;
  Index modes = 1, cutoff = 16;
  if (module == "hilbert") {
    names = {"lambda_re", "lambda_im"};
  } else if (module == "liegroup") {
    names = {"alpha", "beta", "gamma"};
  } else if (module == "pullback") {
    rep = m.contains("rep") ? io::parse_rep(m["rep"], "/rep") : su2_spin_rep(0.5);
    names = (rep->label() == "su2") ? Chart::su2_euler().coordinates() : Chart::exponential(*rep).coordinates();
  } else if (module == "weyl") {
    modes = index_or_model(spec.modes, m, "modes").value_or(1);
    cutoff = index_or_model(spec.cutoff, m, "cutoff").value_or(16);
    if (modes < 1) throw SpecError("/modes", "must be positive");
    if (cutoff < 3) throw SpecError("/cutoff", "must be at least 3");
    for (Index k = 1; k <= modes; ++k) names.push_back("q" + std::to_string(k));
    for (Index k = 1; k <= modes; ++k) names.push_back("p" + std::to_string(k));
  } else if (module == "qgt") {
    ham = m.contains("hamiltonian") ? io::parse_hamiltonian(m["hamiltonian"], "/hamiltonian")
                                    : io::ParsedHamiltonian{bloch_family(), {"theta", "phi"}};
    names = ham->coordinates;
  } else {
    throw SpecError("/module", "unknown module '" + module + "' (hilbert, liegroup, pullback, weyl, qgt)");
  }
  const Grid grid = grid_of(spec, names, true);
  const verify::Context ctx{grid, spec.tol.check_tol, spec.tol.fd_step};

  RunOutput out;
  out.header = {{"type", "header"}, {"mode", "verify"}, {"module", module}, {"grid", grid_header(grid)}};
  if (module == "hilbert") {
    out.report = verify::hilbert_suite(ctx);
  } else if (module == "liegroup") {
    out.report = verify::liegroup_suite(ctx);
  } else if (module == "pullback") {
    ComplexVector fiducial = ComplexVector::Unit(rep->dim(), 0);
    if (m.contains("fiducial")) fiducial = io::complex_vector_at(m["fiducial"], "/fiducial");
    if (fiducial.size() != rep->dim()) throw SpecError("/fiducial", "length does not match representation dimension");
    const Chart chart = rep->label() == "su2" ? Chart::su2_euler() : Chart::exponential(*rep);
    out.report = verify::pullback_suite(*rep, fiducial, chart, ctx);
  } else if (module == "weyl") {
    out.report = verify::weyl_suite(modes, cutoff, ctx);
  } else {
    const Index level = index_or_model(spec.level, m, "level").value_or(0);
    out.report = verify::qgt_suite(ham->family, level, ctx, QGTOptions{spec.tol.degeneracy_tol});
  }
  return out;
}

}  // namespace detail

inline RunOutput run(const RunSpec& spec) {
  switch (spec.mode) {
    case Mode::group: return detail::run_group(spec);
    case Mode::weyl: return detail::run_weyl(spec);
    case Mode::qgt: return detail::run_qgt(spec);
    case Mode::verify: return detail::run_verify(spec);
  }
  throw SpecError("/mode", "unknown mode");
}

namespace detail {

inline void flatten(const json& m, std::vector<double>& row, bool complex_entries) {
  for (const auto& r : m)
    for (const auto& v : r) {
      if (complex_entries) {
        row.push_back(v[0].get<double>());
        row.push_back(v[1].get<double>());
      } else {
        row.push_back(v.get<double>());
      }
    }
}

inline std::vector<std::string> matrix_columns(const std::string& prefix, std::size_t k, bool complex_entries) {
  std::vector<std::string> cols;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      const std::string base = prefix + "_" + std::to_string(i) + std::to_string(j);
      if (complex_entries) {
        cols.push_back(base + "_re");
        cols.push_back(base + "_im");
      } else {
        cols.push_back(base);
      }
    }
  return cols;
}

}  // namespace detail

inline void write_output(const RunOutput& out, Format format, std::ostream& os) {
  if (format == Format::jsonl) {
    os << out.header.dump() << '\n';
    for (const auto& r : out.records) os << r.dump() << '\n';
    if (out.report) os << to_json(*out.report).dump() << '\n';
    return;
  }
  const auto names = out.header.value("coordinates", std::vector<std::string>{});
  const std::size_t k = names.size();
  std::vector<std::string> cols = names;
  const bool qgt = out.header.value("mode", "") == "qgt";
  const auto add = [&](const std::string& p, bool c) {
    const auto mc = detail::matrix_columns(p, k, c);
    cols.insert(cols.end(), mc.begin(), mc.end());
  };
  if (qgt) {
    add("h", true);
    cols.push_back("gap");
  } else {
    add("metric", false);
    add("two_form", false);
  }
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << '\n';
  char buf[64];
  for (const auto& r : out.records) {
    std::vector<double> row;
    for (const auto& v : r["point"]) row.push_back(v.get<double>());
    if (qgt) {
      detail::flatten(r["h"], row, true);
      row.push_back(r["gap"].is_number() ? r["gap"].get<double>() : std::nan(""));
    } else {
      detail::flatten(r["metric"], row, false);
      detail::flatten(r["two_form"], row, false);
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      os << (i ? "," : "") << buf;
    }
    os << '\n';
  }
}

inline std::vector<json> read_records(std::istream& is, const std::string& label) {
  std::vector<json> recs;
  std::string line;
  Index lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw SpecError(label + ":" + std::to_string(lineno), std::string("invalid JSON: ") + e.what());
    }
    if (j.value("type", "") == "record") recs.push_back(std::move(j));
  }
  return recs;
}

inline std::vector<json> read_records(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw SpecError(path, "cannot open file");
  return read_records(f, path);
}

// Entrywise max deviation per record over the tensor fields both records
// carry (metric, two_form, h, berry_form).
inline Report compare_outputs(const std::vector<json>& a, const std::vector<json>& b, double tol) {
  if (a.size() != b.size()) {
    throw SpecError("/records", "grid mismatch: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " records");
  }
  Report r;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string p = "/records/" + std::to_string(i);
    const RealVector pa = io::real_vector_at(io::member(a[i], "point", p), p + "/point");
    const RealVector pb = io::real_vector_at(io::member(b[i], "point", p), p + "/point");
    if (pa.size() != pb.size() || (pa - pb).cwiseAbs().maxCoeff() > 1e-12) throw SpecError(p + "/point", "grid mismatch");
    double dev = 0.0;
    bool any = false;
    for (const char* key : {"metric", "two_form", "berry_form"}) {
      if (!a[i].contains(key) || !b[i].contains(key)) continue;
      const RealMatrix ma = io::real_matrix_at(a[i][key], p + "/" + key), mb = io::real_matrix_at(b[i][key], p + "/" + key);
      if (ma.rows() != mb.rows()) throw SpecError(p + "/" + key, "shape mismatch");
      dev = std::max(dev, (ma - mb).cwiseAbs().maxCoeff());
      any = true;
    }
    if (a[i].contains("h") && b[i].contains("h")) {
      const ComplexMatrix ha = io::complex_matrix_at(a[i]["h"], p + "/h"), hb = io::complex_matrix_at(b[i]["h"], p + "/h");
      if (ha.rows() != hb.rows()) throw SpecError(p + "/h", "shape mismatch");
      dev = std::max(dev, (ha - hb).cwiseAbs().maxCoeff());
      any = true;
    }
    if (!any) throw SpecError(p, "records share no tensor field");
    r.add("record " + std::to_string(i), dev, tol);
  }
  return r;
}

inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const NumericalRefusal*>(&e)) return kExitRefusal;
  return kExitSpecError;
}

// Entry point shared by the `qpt` binary and the tests.
inline int main_entry(int argc, const char* const* argv, std::ostream& os = std::cout, std::ostream& es = std::cerr) {
  CLI::App app{"qpt: classical tensors pulled back from quantum states"};
  app.require_subcommand(1);
  RunSpec spec;
  std::string spec_path, out_path, format_text = "jsonl";
  std::optional<double> tol;
  std::string compare_a, compare_b;
  double compare_tol = 1e-8;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--spec", spec_path, "JSON model spec");
    sub->add_option("--out", out_path, "output path (default stdout)");
    sub->add_option("--format", format_text, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
    sub->add_option("--grid", spec.grid, "inline grid, e.g. beta=0.2:2.9:5,gamma=0:6:5");
    sub->add_flag("--projective", spec.projective, "use the projective (ray-space) tensor");
    sub->add_option("--tol", tol, "override every check tolerance");
    sub->add_option("--fd-step", spec.tol.fd_step, "finite-difference step");
    sub->add_option("--degeneracy-tol", spec.tol.degeneracy_tol, "relative gap below which a level is degenerate");
  };
  auto* group = app.add_subcommand("group", "pull-back along a group orbit over a chart grid");
  common(group);
  group->add_option("--frame", spec.frame, "coframe side: right or left");
  group->add_flag("--physical", spec.physical, "scale by the chart's exponent normalization squared");
  auto* weyl = app.add_subcommand("weyl", "Weyl system on truncated Fock space");
  common(weyl);
  weyl->add_option("--modes", spec.modes, "number of modes");
  weyl->add_option("--cutoff", spec.cutoff, "Fock levels per mode");
  weyl->add_option("--lagrangian", spec.lagrangian, "comma-separated directions: q<k>, p<k>, or c1:c2:...");
  auto* qgt = app.add_subcommand("qgt", "quantum geometric tensor of a Hamiltonian family");
  common(qgt);
  qgt->add_option("--level", spec.level, "eigenstate index (ascending energy)");
  auto* ver = app.add_subcommand("verify", "run a module's invariant suite");
  common(ver);
  ver->add_option("--module", spec.module, "hilbert, liegroup, pullback, weyl, qgt");
  ver->add_option("--modes", spec.modes, "number of modes (weyl)");
  ver->add_option("--cutoff", spec.cutoff, "Fock levels per mode (weyl)");
  ver->add_option("--level", spec.level, "eigenstate index (qgt)");
  auto* cmp = app.add_subcommand("compare", "max deviation between two JSON-lines outputs");
  cmp->add_option("file_a", compare_a)->required();
  cmp->add_option("file_b", compare_b)->required();
  cmp->add_option("--tol", compare_tol, "pass threshold");
  cmp->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, os, es);
    return rc == 0 ? kExitOk : kExitSpecError;
  }

  try {
    std::ofstream file;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) throw SpecError("--out", "cannot open '" + out_path + "' for writing");
    }
    std::ostream& sink = out_path.empty() ? os : file;

    if (cmp->parsed()) {
      const Report r = compare_outputs(read_records(compare_a), read_records(compare_b), compare_tol);
      json j = to_json(r);
      double worst = 0.0;
      for (const auto& c : r.checks) worst = std::max(worst, c.residual);
      j["max_deviation"] = worst;
      sink << j.dump() << '\n';
      return r.pass() ? kExitOk : kExitCheckFailed;
    }

    if (group->parsed()) spec.mode = Mode::group;
    else if (weyl->parsed()) spec.mode = Mode::weyl;
    else if (qgt->parsed()) spec.mode = Mode::qgt;
    else spec.mode = Mode::verify;
    spec.tol.check_tol = tol;
    if (!spec_path.empty()) {
      std::ifstream f(spec_path);
      if (!f) throw SpecError("--spec", "cannot open '" + spec_path + "'");
      try {
        spec.model = json::parse(f);
      } catch (const json::parse_error& e) {
        throw SpecError("--spec", std::string("invalid JSON: ") + e.what());
      }
      if (!spec.model.is_object()) throw SpecError("", "spec must be a JSON object");
    }
    const RunOutput out = run(spec);
    write_output(out, format_text == "csv" ? Format::csv : Format::jsonl, sink);
    if (format_text == "csv" && out.report) es << to_json(*out.report).dump() << '\n';
    if (out.report && !out.report->pass()) {
      for (const auto& c : out.report->checks)
        if (!c.pass) es << "check failed: " << c.name << " residual " << c.residual << " > " << c.tolerance << '\n';
      return kExitCheckFailed;
    }
    return kExitOk;
  } catch (const Error& e) {
    es << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const nlohmann::json::exception& e) {
    es << "error: malformed record: " << e.what() << '\n';
    return kExitSpecError;
  }
}

}  // namespace qpt::cli

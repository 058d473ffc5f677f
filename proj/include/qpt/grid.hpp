#pragma once

// Chart grids. Inline form: comma-separated `name=value` (fixed) or
// `name=start:stop:count` (swept) entries, e.g.
//   alpha=0.3,beta=0.2:2.9:5,gamma=0:6:5
// Coordinates not mentioned are fixed at 0. Points are enumerated row-major
// over the swept axes in chart-coordinate order.

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qpt/types.hpp"

namespace qpt {

// Malformed input, located by a JSON-pointer style path.
class SpecError : public Error {
 public:
  SpecError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct GridAxis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  Index count = 1;
  bool swept = false;

  double value(Index i) const {
    if (!swept || count == 1) return start;
    return start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
};

class Grid {
 public:
  explicit Grid(std::vector<GridAxis> axes) : axes_(std::move(axes)) {
    for (Index a = 0; a < static_cast<Index>(axes_.size()); ++a)
      if (axes_[static_cast<std::size_t>(a)].swept) swept_.push_back(a);
  }

  const std::vector<GridAxis>& axes() const { return axes_; }
  const std::vector<Index>& swept() const { return swept_; }

  std::vector<std::string> swept_names() const {
    std::vector<std::string> out;
    for (Index a : swept_) out.push_back(axes_[static_cast<std::size_t>(a)].name);
    return out;
  }

  Index size() const {
    Index n = 1;
    for (Index a : swept_) n *= axes_[static_cast<std::size_t>(a)].count;
    return n;
  }

  // Full chart coordinates of point `flat`.
  RealVector point(Index flat) const {
    RealVector x(static_cast<Index>(axes_.size()));
    for (std::size_t a = 0; a < axes_.size(); ++a) x[static_cast<Index>(a)] = axes_[a].start;
    for (auto it = swept_.rbegin(); it != swept_.rend(); ++it) {
      const auto& ax = axes_[static_cast<std::size_t>(*it)];
      x[*it] = ax.value(flat % ax.count);
      flat /= ax.count;
    }
    return x;
  }

  RealVector swept_part(const RealVector& full) const {
    RealVector s(static_cast<Index>(swept_.size()));
    for (std::size_t i = 0; i < swept_.size(); ++i) s[static_cast<Index>(i)] = full[swept_[i]];
    return s;
  }

  // Submatrix on the swept coordinates.
  RealMatrix restrict(const RealMatrix& m) const {
    const Index k = static_cast<Index>(swept_.size());
    RealMatrix out(k, k);
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < k; ++j) out(i, j) = m(swept_[static_cast<std::size_t>(i)], swept_[static_cast<std::size_t>(j)]);
    return out;
  }

 private:
  std::vector<GridAxis> axes_;
  std::vector<Index> swept_;
};

namespace detail {

inline double parse_number(const std::string& text, const std::string& path) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw SpecError(path, "'" + text + "' is not a number");
  }
}

inline std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline std::vector<GridAxis> default_axes(const std::vector<std::string>& names) {
  std::vector<GridAxis> axes;
  for (const auto& n : names) axes.push_back({n, 0.0, 0.0, 1, false});
  return axes;
}

inline GridAxis& find_axis(std::vector<GridAxis>& axes, const std::string& name, const std::string& path) {
  auto it = std::find_if(axes.begin(), axes.end(), [&](const GridAxis& a) { return a.name == name; });
  if (it == axes.end()) throw SpecError(path, "unknown coordinate '" + name + "'");
  return *it;
}

inline void set_range(GridAxis& ax, double start, double stop, double count, const std::string& path) {
  if (count < 1 || count != static_cast<double>(static_cast<Index>(count))) {
    throw SpecError(path, "grid count must be an integer >= 1");
  }
  ax.start = start;
  ax.stop = stop;
  ax.count = static_cast<Index>(count);
  ax.swept = true;
}

inline Grid finish_grid(std::vector<GridAxis> axes, const std::string& path) {
  Grid g(std::move(axes));
  if (g.swept().empty()) throw SpecError(path, "empty grid specification (no swept coordinate)");
  return g;
}

}  // namespace detail

inline Grid parse_grid(const std::string& spec, const std::vector<std::string>& names,
                       const std::string& path = "/grid") {
  auto axes = detail::default_axes(names);
  if (spec.find_first_not_of(" \t") == std::string::npos) throw SpecError(path, "empty grid specification");
  for (const auto& entry : detail::split_on(spec, ',')) {
    const auto eq = entry.find('=');
    if (eq == std::string::npos) throw SpecError(path, "expected name=value or name=start:stop:count, got '" + entry + "'");
    const std::string name = entry.substr(0, eq);
    const auto parts = detail::split_on(entry.substr(eq + 1), ':');
    GridAxis& ax = detail::find_axis(axes, name, path);
    if (parts.size() == 1) {
      ax.start = ax.stop = detail::parse_number(parts[0], path + "/" + name);
      ax.count = 1;
      ax.swept = false;
    } else if (parts.size() == 3) {
      detail::set_range(ax, detail::parse_number(parts[0], path + "/" + name),
                        detail::parse_number(parts[1], path + "/" + name),
                        detail::parse_number(parts[2], path + "/" + name), path + "/" + name);
    } else {
      throw SpecError(path + "/" + name, "expected value or start:stop:count");
    }
  }
  return detail::finish_grid(std::move(axes), path);
}

// Object form: {"beta": {"start": 0.2, "stop": 2.9, "count": 5}, "alpha": 0.3}
// or the inline string form.
inline Grid parse_grid(const nlohmann::json& j, const std::vector<std::string>& names,
                       const std::string& path = "/grid") {
  if (j.is_string()) return parse_grid(j.get<std::string>(), names, path);
  if (!j.is_object() || j.empty()) throw SpecError(path, "empty grid specification");
  auto axes = detail::default_axes(names);
  for (const auto& [name, v] : j.items()) {
    const std::string p = path + "/" + name;
    GridAxis& ax = detail::find_axis(axes, name, path);
    if (v.is_number()) {
      ax.start = ax.stop = v.get<double>();
      ax.swept = false;
    } else if (v.is_object()) {
      for (const char* key : {"start", "stop", "count"})
        if (!v.contains(key) || !v[key].is_number()) throw SpecError(p + "/" + key, "missing or not a number");
      detail::set_range(ax, v["start"].get<double>(), v["stop"].get<double>(), v["count"].get<double>(), p);
    } else {
      throw SpecError(p, "expected a number or {start, stop, count}");
    }
  }
  return detail::finish_grid(std::move(axes), path);
}

inline Grid parse_grid(const char* spec, const std::vector<std::string>& names, const std::string& path = "/grid") {
  return parse_grid(std::string(spec), names, path);
}

}  // namespace qpt

#pragma once

// File formats: far fields and objective traces as CSV, scenes, solutions
// and experiment configurations as versioned JSON. Every writer has a
// matching reader.

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "farsplit/farfield.hpp"
#include "farsplit/split_l1.hpp"
#include "farsplit/split_ls.hpp"
#include "farsplit/synth.hpp"

namespace farsplit {

inline constexpr int kFormatVersion = 1;

using json = nlohmann::json;

/// Malformed or unreadable input file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// %.17g, enough to round-trip a double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("write failed for " + path);
}

// ---- CSV ----

/// Rows t,re,im at the grid angles.
inline std::string farfield_csv(const FarField& f) {
  std::string s = "t,re,im\n";
  for (int j = 0; j < f.size(); ++j) {
    const auto z = f.samples()[j];
    s += format_double(f.grid().angle(j)) + "," + format_double(z.real()) + "," + format_double(z.imag()) + "\n";
  }
  return s;
}

namespace detail {

inline std::vector<std::vector<double>> parse_csv(const std::string& text, std::size_t columns,
                                                  const std::string& header) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != header) throw IoError("csv: expected header '" + header + "'");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw IoError("csv: bad number '" + cell + "'");
      }
      if (used != cell.size()) throw IoError("csv: bad number '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() != columns) throw IoError("csv: expected " + std::to_string(columns) + " columns");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

inline FarField parse_farfield_csv(const std::string& text) {
  const auto rows = detail::parse_csv(text, 3, "t,re,im");
  const int M = static_cast<int>(rows.size());
  if (M < 4 || M % 2) throw IoError("far field csv: need an even number (>= 4) of rows");
  const AngularGrid grid(M);
  std::vector<cplx> s(rows.size());
  for (int j = 0; j < M; ++j) {
    if (std::abs(rows[j][0] - grid.angle(j)) > 1e-12) throw IoError("far field csv: angles are not the uniform grid");
    s[j] = {rows[j][1], rows[j][2]};
  }
  return FarField::from_samples(grid, std::move(s));
}

inline void write_farfield_csv(const std::string& path, const FarField& f) { write_text(path, farfield_csv(f)); }
inline FarField read_farfield_csv(const std::string& path) { return parse_farfield_csv(read_text(path)); }

inline std::string trace_csv(const std::vector<TracePoint>& trace) {
  std::string s = "iter,objective,residual\n";
  for (const auto& p : trace)
    s += std::to_string(p.iter) + "," + format_double(p.objective) + "," + format_double(p.residual) + "\n";
  return s;
}

inline std::vector<TracePoint> parse_trace_csv(const std::string& text) {
  std::vector<TracePoint> out;
  for (const auto& r : detail::parse_csv(text, 3, "iter,objective,residual"))
    out.push_back({static_cast<int>(r[0]), r[1], r[2]});
  return out;
}

// ---- JSON helpers ----

namespace detail {

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }
inline json to_json(Vec2 v) { return json::array({v.x, v.y}); }

inline json to_json(const std::vector<cplx>& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(to_json(z));
  return a;
}

inline json to_json(const ArcMask& m) {
  json a = json::array();
  for (const auto& arc : m.arcs()) a.push_back(json::array({arc.start, arc.end}));
  return a;
}

template <class T>
T get(const json& j, const char* key) {
  if (!j.contains(key)) throw IoError(std::string("json: missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw IoError(std::string("json: field '") + key + "': " + e.what());
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? get<T>(j, key) : fallback;
}

inline cplx complex_from(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw IoError("json: complex numbers are [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Vec2 point_from(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw IoError("json: points are [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline std::vector<cplx> complex_list(const json& j) {
  if (!j.is_array()) throw IoError("json: expected an array of [re, im]");
  std::vector<cplx> v;
  for (const auto& e : j) v.push_back(complex_from(e));
  return v;
}

inline ArcMask arcs_from(const json& j) {
  if (j.is_null()) return {};
  if (!j.is_array()) throw IoError("json: omega is a list of [start, end]");
  std::vector<std::pair<double, double>> arcs;
  for (const auto& a : j) {
    if (!a.is_array() || a.size() != 2) throw IoError("json: omega arcs are [start, end]");
    arcs.emplace_back(a[0].get<double>(), a[1].get<double>());
  }
  try {
    return arcs.empty() ? ArcMask{} : ArcMask(arcs);
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("json: omega: ") + e.what());
  }
}

inline void check_version(const json& j) {
  const int v = get_or<int>(j, "version", kFormatVersion);
  if (v != kFormatVersion) throw IoError("json: unsupported version " + std::to_string(v));
}

inline json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("json: ") + e.what());
  }
}

}  // namespace detail

// ---- scenes ----

inline json scene_to_json(const Scene& s) {
  using detail::to_json;
  json comps = json::array();
  for (const auto& c : s.components) {
    json jc{{"center", to_json(c.center)}, {"radius", c.radius}};
    if (c.order) jc["order"] = *c.order;
    if (const auto* m = std::get_if<ModalGenerator>(&c.generator)) {
      jc["generator"] = {{"type", "modal"}, {"taper", m->taper}};
      if (!m->coefficients.empty()) jc["generator"]["coefficients"] = to_json(m->coefficients);
    } else if (const auto* p = std::get_if<PointGenerator>(&c.generator)) {
      jc["generator"] = {{"type", "point"}, {"amplitude", to_json(p->amplitude)}};
    } else {
      const auto& st = std::get<StripGenerator>(c.generator);
      jc["generator"] = {{"type", "strip"}, {"width", st.width}, {"orientation", st.orientation}};
    }
    comps.push_back(std::move(jc));
  }
  return {{"version", kFormatVersion},
          {"k", s.k},
          {"grid_size", s.grid.size()},
          {"components", std::move(comps)},
          {"omega", to_json(s.omega)},
          {"noise", {{"level", s.noise.level}, {"seed", s.noise.seed}}}};
}

inline Scene scene_from_json(const json& j) {
  using namespace detail;
  if (!j.is_object()) throw IoError("scene: expected a JSON object");
  check_version(j);
  Scene s;
  s.k = get_or<double>(j, "k", 1.0);
  try {
    s.grid = AngularGrid(get_or<int>(j, "grid_size", 512));
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("scene: ") + e.what());
  }
  if (!j.contains("components") || !j["components"].is_array()) throw IoError("scene: missing components");
  for (const auto& jc : j["components"]) {
    SourceComponent c;
    c.center = point_from(jc.at("center"));
    c.radius = get_or<double>(jc, "radius", 0.0);
    if (jc.contains("order")) c.order = get<int>(jc, "order");
    const json g = jc.contains("generator") ? jc["generator"] : json{{"type", "modal"}};
    const auto type = get_or<std::string>(g, "type", "modal");
    if (type == "modal") {
      ModalGenerator m;
      m.taper = get_or<double>(g, "taper", 0.0);
      if (g.contains("coefficients")) m.coefficients = complex_list(g["coefficients"]);
      c.generator = m;
    } else if (type == "point") {
      c.generator = PointGenerator{g.contains("amplitude") ? complex_from(g["amplitude"]) : cplx(1.0)};
    } else if (type == "strip") {
      c.generator = StripGenerator{get_or<double>(g, "width", 1.0), get_or<double>(g, "orientation", 0.0)};
    } else {
      throw IoError("scene: unknown generator type '" + type + "'");
    }
    s.components.push_back(std::move(c));
  }
  s.omega = arcs_from(j.contains("omega") ? j["omega"] : json());
  if (j.contains("noise")) {
    s.noise.level = get_or<double>(j["noise"], "level", 0.0);
    s.noise.seed = get_or<std::uint64_t>(j["noise"], "seed", 0);
  }
  return s;
}

inline Scene read_scene(const std::string& path) { return scene_from_json(detail::parse_json(read_text(path))); }

inline void write_scene(const std::string& path, const Scene& s) { write_text(path, scene_to_json(s).dump(2) + "\n"); }

/// Splitting geometry of a scene: centers, resolved orders, arc, grid, k.
inline SplitGeometry scene_geometry(const Scene& s) {
  SplitGeometry g;
  g.k = s.k;
  g.grid = s.grid;
  g.omega = s.omega;
  for (const auto& c : s.components) {
    g.centers.push_back(c.center);
    g.orders.push_back(c.resolved_order(s.k));
  }
  return g;
}

// ---- solutions ----

inline json solution_to_json(const SplitSolution& s, const SplitGeometry& g) {
  using detail::to_json;
  json comps = json::array();
  for (int i = 0; i < static_cast<int>(s.alphas.size()); ++i)
    comps.push_back({{"center", to_json(g.centers.at(i))},
                     {"order", s.alphas[i].N},
                     {"coefficients", to_json(s.alphas[i].values)}});
  json j{{"version", kFormatVersion},
         {"method", s.diagnostics.method},
         {"k", g.k},
         {"grid_size", g.grid.size()},
         {"omega", to_json(g.omega)},
         {"residual", s.residual},
         {"condition_number", s.diagnostics.condition_number},
         {"iterations", s.diagnostics.iterations},
         {"objective", s.diagnostics.objective},
         {"components", std::move(comps)},
         {"beta", to_json(s.beta.samples())}};
  return j;
}

struct LoadedSolution {
  SplitSolution solution;
  SplitGeometry geometry;
};

inline LoadedSolution solution_from_json(const json& j) {
  using namespace detail;
  check_version(j);
  LoadedSolution out;
  auto& g = out.geometry;
  auto& s = out.solution;
  g.k = get<double>(j, "k");
  g.grid = AngularGrid(get<int>(j, "grid_size"));
  g.omega = arcs_from(j.contains("omega") ? j["omega"] : json());
  s.residual = get<double>(j, "residual");
  s.diagnostics.method = get<std::string>(j, "method");
  s.diagnostics.condition_number = get<double>(j, "condition_number");
  s.diagnostics.iterations = get<int>(j, "iterations");
  s.diagnostics.objective = get<double>(j, "objective");
  if (!j.contains("components") || !j["components"].is_array()) throw IoError("solution: missing components");
  for (const auto& jc : j["components"]) {
    const int N = get<int>(jc, "order");
    auto v = complex_list(jc.at("coefficients"));
    if (static_cast<int>(v.size()) != 2 * N + 1) throw IoError("solution: coefficient count != 2N+1");
    g.centers.push_back(point_from(jc.at("center")));
    g.orders.push_back(N);
    s.alphas.emplace_back(N, std::move(v));
  }
  auto beta = complex_list(j.at("beta"));
  if (static_cast<int>(beta.size()) != g.grid.size()) throw IoError("solution: beta length != grid_size");
  s.beta = FarField::from_samples(g.grid, std::move(beta));
  return out;
}

inline LoadedSolution read_solution(const std::string& path) {
  return solution_from_json(detail::parse_json(read_text(path)));
}

// ---- experiment configuration ----

enum class Method { ls, l1 };

struct ExperimentConfig {
  std::string scene;
  std::string gamma;  // optional measured data; synthesized from the scene when empty
  Method method = Method::ls;
  L1Config l1;
  std::string output = ".";
  std::string format = "json";
};

/// Weight selection: "uniform", "auto" (pairwise separation weights),
/// "triangle", or a comma separated list of positive numbers.
inline void apply_weights(L1Config& cfg, const std::string& spec) {
  if (spec == "uniform") {
    cfg.weights = WeightMode::uniform;
  } else if (spec == "auto" || spec == "pairwise") {
    cfg.weights = WeightMode::pairwise;
  } else if (spec == "triangle") {
    cfg.weights = WeightMode::triangle;
  } else {
    cfg.weights = WeightMode::explicit_list;
    cfg.explicit_weights.clear();
    std::istringstream in(spec);
    std::string cell;
    while (std::getline(in, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cell.size() || cell.empty() || !(v > 0.0))
        throw std::invalid_argument("weights: expected uniform|auto|triangle or a list of positive numbers");
      cfg.explicit_weights.push_back(v);
    }
  }
}

inline ExperimentConfig config_from_json(const json& j) {
  using namespace detail;
  check_version(j);
  ExperimentConfig c;
  c.scene = get<std::string>(j, "scene");
  c.gamma = get_or<std::string>(j, "gamma", "");
  const auto m = get_or<std::string>(j, "method", "ls");
  if (m != "ls" && m != "l1") throw IoError("config: method must be ls or l1");
  c.method = m == "ls" ? Method::ls : Method::l1;
  c.output = get_or<std::string>(j, "output", ".");
  c.format = get_or<std::string>(j, "format", "json");
  if (c.format != "json" && c.format != "csv") throw IoError("config: format must be json or csv");
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    c.l1.mu = get_or<double>(s, "mu", c.l1.mu);
    c.l1.max_iters = get_or<int>(s, "iters", c.l1.max_iters);
    c.l1.tol = get_or<double>(s, "tol", c.l1.tol);
    if (s.contains("window")) c.l1.window = get<int>(s, "window");
    if (s.contains("weights")) {
      const auto& w = s["weights"];
      if (w.is_array()) {
        c.l1.weights = WeightMode::explicit_list;
        for (const auto& v : w) c.l1.explicit_weights.push_back(v.get<double>());
      } else {
        try {
          apply_weights(c.l1, w.get<std::string>());
        } catch (const std::exception& e) {
          throw IoError(std::string("config: ") + e.what());
        }
      }
    }
  }
  return c;
}

inline ExperimentConfig read_config(const std::string& path) {
  return config_from_json(detail::parse_json(read_text(path)));
}

}  // namespace farsplit

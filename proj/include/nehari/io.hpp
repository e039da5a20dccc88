#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nehari/driver.hpp"

namespace nehari {

inline constexpr const char* version_string = "1.0.0";

// Run-wide configuration: everything a solve needs, in one serializable
// record.  Parsing is tolerant (missing keys keep their defaults) but typed;
// serialization is canonical (sorted keys, round-trip-exact numbers), so
// equal configs produce identical bytes.

struct Tolerances {
  double descent = 1e-7;    // relative residual stopping bar
  double manifold = 1e-6;   // constraint-membership slack
  double vectorial = 1e-6;  // component-collapse split
  double decompose = 1e-2;  // identity-coordinate consistency on grid data
};

struct RunConfig {
  Params params;
  double r_max = 30.0;
  std::size_t n = 2400;
  int theta_nodes = 128;
  Tolerances tolerances;
  std::uint64_t rng_seed = 2025;
  std::optional<double> sobolev_override;
  std::string output_dir;

  void validate() const {
    params.validate();
    if (!(r_max > 0.0)) throw config_error("config: r_max must be positive");
    if (n < 16) throw config_error("config: grid needs at least 16 nodes");
    if (theta_nodes < 4) throw config_error("config: theta_nodes must be at least 4");
    if (!(tolerances.descent > 0.0) || !(tolerances.manifold > 0.0) ||
        !(tolerances.vectorial > 0.0) || !(tolerances.decompose > 0.0))
      throw config_error("config: tolerances must be positive");
    if (sobolev_override && !(*sobolev_override > 0.0))
      throw config_error("config: sobolev_override must be positive");
  }

  DriverOptions driver_options() const {
    DriverOptions opt;
    opt.r_max = r_max;
    opt.n = n;
    opt.descent.theta_m = theta_nodes;
    opt.descent.tol_rel = tolerances.descent;
    opt.manifold_tol = tolerances.manifold;
    opt.vectorial_tol = tolerances.vectorial;
    opt.decompose_tol = tolerances.decompose;
    return opt;
  }

  double sobolev() const {
    if (sobolev_override) return *sobolev_override;
    return sobolev_constant(params.p, params.lambda);
  }
};

namespace io_detail {

inline double field(const nlohmann::json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw config_error(std::string("config: ") + key + " must be a number");
  return j[key].get<double>();
}

}  // namespace io_detail

inline nlohmann::json config_to_json(const RunConfig& c) {
  nlohmann::json j;
  j["params"] = {{"p", c.params.p},
                 {"lambda", c.params.lambda},
                 {"mu11", c.params.mu11},
                 {"mu22", c.params.mu22},
                 {"mu12", c.params.mu12}};
  j["grid"] = {{"r_max", c.r_max}, {"n", c.n}};
  j["theta_nodes"] = c.theta_nodes;
  j["tolerances"] = {{"descent", c.tolerances.descent},
                     {"manifold", c.tolerances.manifold},
                     {"vectorial", c.tolerances.vectorial},
                     {"decompose", c.tolerances.decompose}};
  j["rng_seed"] = c.rng_seed;
  j["sobolev_override"] =
      c.sobolev_override ? nlohmann::json(*c.sobolev_override) : nlohmann::json(nullptr);
  j["output_dir"] = c.output_dir;
  return j;
}

inline RunConfig config_from_json(const nlohmann::json& j) {
  using io_detail::field;
  RunConfig c;
  if (!j.is_object()) throw config_error("config: top level must be a JSON object");
  if (j.contains("params")) {
    const auto& p = j["params"];
    c.params.p = field(p, "p", c.params.p);
    c.params.lambda = field(p, "lambda", c.params.lambda);
    c.params.mu11 = field(p, "mu11", c.params.mu11);
    c.params.mu22 = field(p, "mu22", c.params.mu22);
    c.params.mu12 = field(p, "mu12", c.params.mu12);
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    c.r_max = field(g, "r_max", c.r_max);
    if (g.contains("n")) {
      if (!g["n"].is_number_unsigned() && !g["n"].is_number_integer())
        throw config_error("config: grid.n must be an integer");
      c.n = g["n"].get<std::size_t>();
    }
  }
  if (j.contains("theta_nodes")) c.theta_nodes = j["theta_nodes"].get<int>();
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    c.tolerances.descent = field(t, "descent", c.tolerances.descent);
    c.tolerances.manifold = field(t, "manifold", c.tolerances.manifold);
    c.tolerances.vectorial = field(t, "vectorial", c.tolerances.vectorial);
    c.tolerances.decompose = field(t, "decompose", c.tolerances.decompose);
  }
  if (j.contains("rng_seed")) c.rng_seed = j["rng_seed"].get<std::uint64_t>();
  if (j.contains("sobolev_override") && !j["sobolev_override"].is_null())
    c.sobolev_override = j["sobolev_override"].get<double>();
  if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
  return c;
}

inline std::string serialize_config(const RunConfig& c) { return config_to_json(c).dump(2) + "\n"; }

inline RunConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config: invalid JSON: ") + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("config: ") + e.what());
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write file: " + path);
  out << text;
}

inline RunConfig load_config(const std::string& path) { return parse_config(read_text_file(path)); }

// Radial profiles travel as two-column CSV, full double precision.

inline std::string radial_csv(const RadialFn& f) {
  std::string out = "r,value\n";
  const auto& r = f.grid->nodes();
  char buf[80];
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", r[i], f.values[i]);
    out += buf;
  }
  return out;
}

inline void write_radial_csv(const std::string& path, const RadialFn& f) {
  write_text_file(path, radial_csv(f));
}

inline std::vector<double> parse_radial_csv(const std::string& text, const RadialGrid& g) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("r,", 0) != 0)
    throw config_error("state csv: missing r,value header");
  std::vector<double> values;
  values.reserve(g.n());
  const auto& nodes = g.nodes();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const char* s = line.c_str();
    char* end = nullptr;
    const double r = std::strtod(s, &end);
    if (end == s || *end != ',') throw config_error("state csv: malformed row: " + line);
    const double v = std::strtod(end + 1, nullptr);
    const std::size_t i = values.size();
    if (i >= g.n()) throw config_error("state csv: more rows than grid nodes");
    if (std::abs(r - nodes[i]) > 1e-9 * g.r_max())
      throw config_error("state csv: radius column does not match the declared grid");
    values.push_back(v);
  }
  if (values.size() != g.n()) throw config_error("state csv: row count does not match the grid");
  return values;
}

// A saved state is a directory: u.csv, v.csv, and a sidecar naming the grid
// and problem parameters the profiles belong to.

struct LoadedState {
  PairFn state;
  Params params;
  double r_max = 0.0;
  std::size_t n = 0;
};

inline void save_state(const std::string& dir, const PairFn& state, const Params& prm) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  write_radial_csv((fs::path(dir) / "u.csv").string(), state.u);
  write_radial_csv((fs::path(dir) / "v.csv").string(), state.v);
  nlohmann::json side;
  side["grid"] = {{"r_max", state.u.grid->r_max()}, {"n", state.u.grid->n()}};
  side["params"] = {{"p", prm.p},
                    {"lambda", prm.lambda},
                    {"mu11", prm.mu11},
                    {"mu22", prm.mu22},
                    {"mu12", prm.mu12}};
  write_text_file((fs::path(dir) / "state.json").string(), side.dump(2) + "\n");
}

inline LoadedState load_state(const std::string& path) {
  namespace fs = std::filesystem;
  fs::path dir(path);
  if (dir.extension() == ".json") dir = dir.parent_path();
  nlohmann::json side;
  try {
    side = nlohmann::json::parse(read_text_file((dir / "state.json").string()));
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("state sidecar: invalid JSON: ") + e.what());
  }
  LoadedState out;
  try {
    out.r_max = side.at("grid").at("r_max").get<double>();
    out.n = side.at("grid").at("n").get<std::size_t>();
    const auto& p = side.at("params");
    out.params.p = p.at("p").get<double>();
    out.params.lambda = p.at("lambda").get<double>();
    out.params.mu11 = p.at("mu11").get<double>();
    out.params.mu22 = p.at("mu22").get<double>();
    out.params.mu12 = p.at("mu12").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("state sidecar: ") + e.what());
  }
  const GridPtr g = make_grid(out.r_max, out.n);
  RadialFn u(g), v(g);
  u.values = parse_radial_csv(read_text_file((dir / "u.csv").string()), *g);
  v.values = parse_radial_csv(read_text_file((dir / "v.csv").string()), *g);
  out.state = PairFn{std::move(u), std::move(v)};
  return out;
}

// Every run that writes artifacts also writes the manifest that reproduces
// it: the full config echo, the command, and the toolchain versions.

inline void write_manifest(const std::string& dir, const std::string& command,
                           const RunConfig& cfg, double wall_seconds) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  nlohmann::json m;
  m["command"] = command;
  m["config"] = config_to_json(cfg);
  m["versions"] = {{"library", version_string},
                   {"serializer", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
#if defined(__VERSION__)
                   {"compiler", __VERSION__}
#else
                   {"compiler", "unknown"}
#endif
  };
  m["wall_time_seconds"] = wall_seconds;
  write_text_file((fs::path(dir) / "manifest.json").string(), m.dump(2) + "\n");
}

}  // namespace nehari

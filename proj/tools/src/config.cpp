#include "oddsrank/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace oddsrank::cli {
namespace {

using nlohmann::json;

const std::set<std::string> kKnownKeys = {
    "data",       "tour",     "target_surface", "rho",     "surface_weights",
    "grid",       "cutoff",   "output_dir",     "solver",  "fallback_book",
    "exclude_incomplete",     "as_of",          "tournaments", "fixtures",
    "top_n",      "outliers", "svg",            "save_graph",  "threads"};

template <typename T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

Surface surface_of(const std::string& text, const char* what) {
  auto s = parse_surface(text);
  if (!s) throw ConfigError(std::string(what) + ": unknown surface '" + text + "'");
  return *s;
}

Date date_of(const std::string& text, const char* what) {
  auto d = parse_date(text);
  if (!d) throw ConfigError(std::string(what) + ": unparseable date '" + text + "'");
  return *d;
}

SurfaceWeights weights_row(const json& row, Surface target) {
  if (!row.is_object()) throw ConfigError("surface_weights rows must be objects");
  SurfaceWeights w = default_surface_weights(target);
  for (const auto& [played, value] : row.items()) {
    if (!value.is_number()) throw ConfigError("surface weight for " + played + " must be a number");
    w[static_cast<std::size_t>(surface_of(played, "surface_weights"))] = value.get<double>();
  }
  return w;
}

/// A number means a uniform off-surface weight; an object gives explicit
/// rows keyed by prediction surface, missing rows keep their defaults.
SurfaceWeightTable weight_table(const json& j) {
  if (j.is_number()) return SurfaceWeightTable::uniform(j.get<double>());
  if (!j.is_object()) throw ConfigError("surface_weights must be a number or an object");
  auto table = SurfaceWeightTable::defaults();
  for (const auto& [target, row] : j.items()) {
    const Surface t = surface_of(target, "surface_weights");
    table.rows[static_cast<std::size_t>(t)] = weights_row(row, t);
  }
  return table;
}

GridSpec grid_of(const json& j) {
  if (!j.is_object()) throw ConfigError("grid must be an object");
  for (const auto& [k, v] : j.items())
    if (k != "rho" && k != "off_surface" && k != "tables")
      throw ConfigError("grid: unknown key '" + k + "'");
  const auto defaults = GridSpec::defaults();
  GridSpec g;
  g.rho_values = j.contains("rho") ? get<std::vector<double>>(j, "rho") : defaults.rho_values;
  if (j.contains("off_surface") && j.contains("tables"))
    throw ConfigError("grid: give either off_surface or tables, not both");
  if (j.contains("off_surface")) {
    g = GridSpec::from_off_surface(g.rho_values, get<std::vector<double>>(j, "off_surface"));
  } else if (j.contains("tables")) {
    for (const auto& t : j.at("tables")) g.tau_tables.push_back(weight_table(t));
  } else {
    g.tau_tables = defaults.tau_tables;
  }
  if (g.rho_values.empty() || g.tau_tables.empty()) throw ConfigError("grid is empty");
  return g;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

}  // namespace

std::vector<Tour> parse_tour_selection(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "both") return {Tour::ATP, Tour::WTA};
  if (auto t = parse_tour(text)) return {*t};
  throw ConfigError("tour must be ATP, WTA or both, got '" + std::string(text) + "'");
}

SolverMethod parse_solver_method(std::string_view text) {
  if (text == "normal_equations" || text == "cg") return SolverMethod::NormalEquations;
  if (text == "iterative_gradient" || text == "lbfgs") return SolverMethod::IterativeGradient;
  throw ConfigError("solver method must be normal_equations or iterative_gradient");
}

std::string_view to_string(SolverMethod m) {
  return m == SolverMethod::NormalEquations ? "normal_equations" : "iterative_gradient";
}

Command parse_command(std::string_view text) {
  if (text == "rank") return Command::Rank;
  if (text == "predict") return Command::Predict;
  if (text == "evaluate") return Command::Evaluate;
  if (text == "tune") return Command::Tune;
  if (text == "anomalies") return Command::Anomalies;
  throw ConfigError("unknown command '" + std::string(text) + "'");
}

std::vector<Tour> RunConfig::active_tours() const {
  std::vector<Tour> out;
  for (Tour t : {Tour::ATP, Tour::WTA}) {
    if (std::find(tours.begin(), tours.end(), t) == tours.end()) continue;
    const bool has_data = std::any_of(data.begin(), data.end(),
                                      [t](const DataSource& d) { return d.tour == t; });
    if (has_data) out.push_back(t);
  }
  return out;
}

void RunConfig::validate(Command cmd) const {
  if (data.empty()) throw ConfigError("no data files given");
  for (const auto& d : data)
    if (!std::filesystem::is_regular_file(d.path))
      throw ConfigError("data file not found: " + d.path.string());
  if (tours_explicit) {
    for (Tour t : tours) {
      const bool has = std::any_of(data.begin(), data.end(),
                                   [t](const DataSource& d) { return d.tour == t; });
      if (!has) throw ConfigError("no data files for tour " + std::string(oddsrank::to_string(t)));
    }
  }
  if (active_tours().empty()) throw ConfigError("no data files for the selected tour");
  try {
    for (auto s : kAllSurfaces) params.for_target(s).validate();
    solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const bool needs_events =
      cmd == Command::Evaluate || cmd == Command::Tune || cmd == Command::Anomalies;
  if (needs_events && tournaments.empty())
    throw ConfigError("no tournaments given (use --tournament NAME:YEAR)");
  if (cmd == Command::Predict) {
    if (!fixtures) throw ConfigError("predict needs a fixtures file");
    if (!std::filesystem::is_regular_file(*fixtures))
      throw ConfigError("fixtures file not found: " + fixtures->string());
  }
  if (cmd == Command::Tune && grid) {
    try {
      for (const auto& p : grid->points())
        for (auto s : kAllSurfaces) p.for_target(s).validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("grid: ") + e.what());
    }
  }
  if (top_n == 0) throw ConfigError("top_n must be positive");
}

RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [k, v] : j.items())
    if (!kKnownKeys.count(k)) throw ConfigError("unknown config key '" + k + "'");

  RunConfig c;
  if (j.contains("data")) {
    const auto& d = j.at("data");
    if (!d.is_object()) throw ConfigError("data must map ATP/WTA to lists of files");
    for (const auto& [tour, files] : d.items()) {
      auto t = parse_tour(tour);
      if (!t) throw ConfigError("data: unknown tour '" + tour + "'");
      if (!files.is_array()) throw ConfigError("data." + tour + " must be a list");
      for (const auto& f : files) {
        if (!f.is_string()) throw ConfigError("data." + tour + " entries must be strings");
        c.data.push_back({resolve(base_dir, f.get<std::string>()), *t});
      }
    }
  }
  if (j.contains("tour")) {
    c.tours = parse_tour_selection(get<std::string>(j, "tour"));
    c.tours_explicit = true;
  }
  if (j.contains("target_surface"))
    c.target_surface = surface_of(get<std::string>(j, "target_surface"), "target_surface");
  if (j.contains("rho")) c.params.rho = get<double>(j, "rho");
  if (j.contains("surface_weights")) c.params.tau = weight_table(j.at("surface_weights"));
  if (j.contains("grid")) c.grid = grid_of(j.at("grid"));
  if (j.contains("cutoff")) c.cutoff = date_of(get<std::string>(j, "cutoff"), "cutoff");
  if (j.contains("output_dir")) c.output_dir = resolve(base_dir, get<std::string>(j, "output_dir"));
  if (j.contains("solver")) {
    const auto& s = j.at("solver");
    if (!s.is_object()) throw ConfigError("solver must be an object");
    for (const auto& [k, v] : s.items()) {
      if (k == "method") c.solver.method = parse_solver_method(v.get<std::string>());
      else if (k == "max_iterations") c.solver.max_iterations = get<int>(s, "max_iterations");
      else if (k == "tolerance") c.solver.gradient_tolerance = get<double>(s, "tolerance");
      else throw ConfigError("solver: unknown key '" + k + "'");
    }
  }
  if (j.contains("fallback_book")) c.parse.fallback_book = get<std::string>(j, "fallback_book");
  if (j.contains("exclude_incomplete")) c.parse.exclude_incomplete = get<bool>(j, "exclude_incomplete");
  if (j.contains("as_of")) c.parse.ingestion_date = date_of(get<std::string>(j, "as_of"), "as_of");
  if (j.contains("tournaments")) {
    for (const auto& t : get<std::vector<std::string>>(j, "tournaments")) {
      try {
        c.tournaments.push_back(TournamentSelector::parse(t));
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
    }
  }
  if (j.contains("fixtures")) c.fixtures = resolve(base_dir, get<std::string>(j, "fixtures"));
  if (j.contains("top_n")) c.top_n = get<std::size_t>(j, "top_n");
  if (j.contains("outliers")) c.outliers = get<std::size_t>(j, "outliers");
  if (j.contains("svg")) c.svg = get<bool>(j, "svg");
  if (j.contains("save_graph")) c.save_graph = get<bool>(j, "save_graph");
  if (j.contains("threads")) c.threads = get<unsigned>(j, "threads");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

}  // namespace oddsrank::cli

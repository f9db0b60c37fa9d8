#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "oddsrank/decay_graph.hpp"
#include "oddsrank/evaluator.hpp"
#include "oddsrank/ingest.hpp"
#include "oddsrank/rating_solver.hpp"

namespace oddsrank::cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Command { Rank, Predict, Evaluate, Tune, Anomalies };

struct DataSource {
  std::filesystem::path path;
  Tour tour = Tour::ATP;
};

/// Everything one invocation needs. Loaded from a JSON file, then patched by
/// command-line flags.
struct RunConfig {
  std::vector<DataSource> data;
  std::vector<Tour> tours = {Tour::ATP, Tour::WTA};
  bool tours_explicit = false;
  Surface target_surface = Surface::Hard;
  ModelParams params;
  std::optional<GridSpec> grid;
  std::optional<Date> cutoff;
  std::filesystem::path output_dir = ".";
  SolverConfig solver;
  ParseOptions parse;
  std::vector<TournamentSelector> tournaments;
  std::optional<std::filesystem::path> fixtures;
  std::size_t top_n = 20;
  std::size_t outliers = 10;
  bool svg = false;
  bool save_graph = false;
  unsigned threads = 0;
  bool verbose = false;

  /// Tours that have at least one data file, in ATP, WTA order.
  std::vector<Tour> active_tours() const;
  /// Throws ConfigError when the command lacks something it needs.
  void validate(Command cmd) const;
};

/// Parses the JSON config document. Relative paths resolve against `base_dir`.
RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

/// "ATP", "WTA" or "both".
std::vector<Tour> parse_tour_selection(std::string_view text);
SolverMethod parse_solver_method(std::string_view text);
std::string_view to_string(SolverMethod m);
Command parse_command(std::string_view text);

}  // namespace oddsrank::cli

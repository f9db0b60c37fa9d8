#include "oddsrank/cli/app.hpp"

#include <ostream>

#include "CLI11.hpp"
#include "oddsrank/cli/commands.hpp"
#include "oddsrank/odds_math.hpp"

namespace oddsrank::cli {
namespace {

/// Raw flag values; applied on top of the config file after parsing.
struct Overrides {
  std::string config;
  std::vector<std::string> atp, wta;
  std::string tour, surface, cutoff, output_dir, solver, fallback_book, as_of, fixtures;
  std::optional<double> rho, off_surface, tolerance;
  std::optional<int> max_iterations;
  std::optional<std::size_t> top_n, outliers;
  std::optional<unsigned> threads;
  std::vector<std::string> tournaments;
  std::vector<double> grid_rho, grid_off_surface;
  bool exclude_incomplete = false, svg = false, save_graph = false, verbose = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config, "JSON run configuration file");
  cmd->add_option("--atp", o.atp, "ATP data CSV (repeatable; adds to the config's list)");
  cmd->add_option("--wta", o.wta, "WTA data CSV (repeatable; adds to the config's list)");
  cmd->add_option("--tour", o.tour, "Tour to run: ATP, WTA or both (default: every tour with data)");
  cmd->add_option("--rho", o.rho, "Per-day decay factor in (0, 1]");
  cmd->add_option("--off-surface", o.off_surface,
                  "Use one weight for every off-surface match instead of the weight table");
  cmd->add_option("--solver", o.solver, "Solver: normal_equations (default) or iterative_gradient");
  cmd->add_option("--max-iterations", o.max_iterations, "Solver iteration cap");
  cmd->add_option("--tolerance", o.tolerance, "Solver gradient tolerance (max norm)");
  cmd->add_option("--fallback-book", o.fallback_book,
                  "Bookmaker column prefix used when AvgW/AvgL are missing (default B365)");
  cmd->add_flag("--exclude-incomplete", o.exclude_incomplete,
                "Drop retirements and walkovers from the training data");
  cmd->add_option("--as-of", o.as_of, "Reject data rows dated after this day (default: today)");
  cmd->add_option("-o,--output-dir", o.output_dir, "Directory for output files (default: .)");
  cmd->add_option("--threads", o.threads, "Worker threads for grid search (0 = all cores)");
  cmd->add_flag("--svg", o.svg, "Also write SVG charts");
  cmd->add_flag("-v,--verbose", o.verbose, "Print every ingestion warning to stderr");
}

void add_events(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-t,--tournament", o.tournaments,
                  "Tournament as NAME:YEAR, e.g. Wimbledon:2025 (repeatable)");
}

RunConfig build_config(const Overrides& o) {
  RunConfig c = o.config.empty() ? RunConfig{} : load_config(o.config);
  for (const auto& p : o.atp) c.data.push_back({p, Tour::ATP});
  for (const auto& p : o.wta) c.data.push_back({p, Tour::WTA});
  if (!o.tour.empty()) {
    c.tours = parse_tour_selection(o.tour);
    c.tours_explicit = true;
  }
  if (!o.surface.empty()) {
    const auto s = parse_surface(o.surface);
    if (!s) throw ConfigError("unknown surface '" + o.surface + "'");
    c.target_surface = *s;
  }
  if (o.rho) c.params.rho = *o.rho;
  if (o.off_surface) c.params.tau = SurfaceWeightTable::uniform(*o.off_surface);
  if (!o.cutoff.empty()) {
    const auto d = parse_date(o.cutoff);
    if (!d) throw ConfigError("unparseable cutoff date '" + o.cutoff + "'");
    c.cutoff = *d;
  }
  if (!o.output_dir.empty()) c.output_dir = o.output_dir;
  if (!o.solver.empty()) c.solver.method = parse_solver_method(o.solver);
  if (o.max_iterations) c.solver.max_iterations = *o.max_iterations;
  if (o.tolerance) c.solver.gradient_tolerance = *o.tolerance;
  if (!o.fallback_book.empty()) c.parse.fallback_book = o.fallback_book;
  if (o.exclude_incomplete) c.parse.exclude_incomplete = true;
  if (!o.as_of.empty()) {
    const auto d = parse_date(o.as_of);
    if (!d) throw ConfigError("unparseable --as-of date '" + o.as_of + "'");
    c.parse.ingestion_date = *d;
  }
  if (!o.fixtures.empty()) c.fixtures = o.fixtures;
  if (o.top_n) c.top_n = *o.top_n;
  if (o.outliers) c.outliers = *o.outliers;
  if (o.threads) c.threads = *o.threads;
  if (!o.tournaments.empty()) {
    c.tournaments.clear();
    for (const auto& t : o.tournaments) {
      try {
        c.tournaments.push_back(TournamentSelector::parse(t));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
  }
  if (!o.grid_rho.empty() || !o.grid_off_surface.empty()) {
    const auto defaults = GridSpec::defaults();
    GridSpec g = c.grid.value_or(defaults);
    if (!o.grid_rho.empty()) g.rho_values = o.grid_rho;
    if (!o.grid_off_surface.empty())
      g = GridSpec::from_off_surface(g.rho_values, o.grid_off_surface);
    c.grid = g;
  }
  c.svg = c.svg || o.svg;
  c.save_graph = c.save_graph || o.save_graph;
  c.verbose = o.verbose;
  return c;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "Player ratings learned from bookmaker odds: rank players, forecast matches, score "
      "forecasts against bookmakers and official rankings, and tune hyperparameters.",
      "oddsrank"};
  app.require_subcommand(1);
  app.footer(
      "Config file (--config) is a JSON object with keys: data {ATP: [files], WTA: [files]}, "
      "tour, target_surface, rho, surface_weights (number or {Target: {Played: w}}), grid "
      "{rho, off_surface | tables}, cutoff, output_dir, solver {method, max_iterations, "
      "tolerance}, fallback_book, exclude_incomplete, as_of, tournaments [\"Name:YEAR\"], "
      "fixtures, top_n, outliers, svg, save_graph, threads. Flags override the file; relative "
      "paths in the file resolve against its directory.\n\n"
      "Exit codes: 0 success, 2 usage or config error, 3 data error, 4 a rating fit did not "
      "converge (outputs are still written), 1 anything else.");
  Overrides o;

  auto* rank = app.add_subcommand("rank", "Fit ratings and write the ratings CSV and a top-N table");
  add_common(rank, o);
  rank->add_option("--surface", o.surface, "Surface to rate players on (Hard, Clay, Grass, Carpet)");
  rank->add_option("--cutoff", o.cutoff, "Train on matches strictly before this date");
  rank->add_option("-n,--top-n", o.top_n, "Rows in the top-N table (default 20)");
  rank->add_flag("--save-graph", o.save_graph, "Also write the decayed odds graph snapshot");

  auto* predict = app.add_subcommand("predict", "Forecast win probabilities for a fixtures CSV");
  add_common(predict, o);
  predict->add_option("-f,--fixtures", o.fixtures,
                      "CSV with player_a, player_b, best_of, surface and optional tour columns");
  predict->add_option("--cutoff", o.cutoff, "Train on matches strictly before this date");

  auto* evaluate = app.add_subcommand(
      "evaluate", "Score the model, bookmakers and official rankings on past tournaments");
  add_common(evaluate, o);
  add_events(evaluate, o);
  evaluate->add_option("--outliers", o.outliers, "Outliers kept in the report (default 10)");

  auto* tune = app.add_subcommand("tune", "Grid-search rho and surface weights on past tournaments");
  add_common(tune, o);
  add_events(tune, o);
  tune->add_option("--grid-rho", o.grid_rho, "Decay factors to try (default 0.98 0.99 0.995 0.999)");
  tune->add_option("--grid-off-surface", o.grid_off_surface,
                   "Uniform off-surface weights to try (default 0.2 0.4 0.6 0.8 1.0)");

  auto* anomalies = app.add_subcommand(
      "anomalies", "List matches where the model and the bookmakers disagree most");
  add_common(anomalies, o);
  add_events(anomalies, o);
  anomalies->add_option("--outliers", o.outliers, "Number of matches to list (default 10)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const auto* chosen = app.get_subcommands().front();
    const Command cmd = parse_command(chosen->get_name());
    return run_command(cmd, build_config(o), out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const InvalidOdds& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace oddsrank::cli

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "oddsrank/decay_graph.hpp"
#include "oddsrank/ingest.hpp"
#include "oddsrank/predictor.hpp"
#include "oddsrank/rating_solver.hpp"

namespace oddsrank {

/// Picks one event out of the record store, e.g. {"Wimbledon", 2025}.
struct TournamentSelector {
  std::string name;
  int year = 0;

  std::string label() const { return name + " " + std::to_string(year); }
  /// Parses "Name:YEAR".
  static TournamentSelector parse(std::string_view text);
};

/// Matches of the selected event (case-insensitive name, calendar year), in
/// record order.
std::vector<MatchRecord> select_fixtures(std::span<const MatchRecord> records,
                                         const TournamentSelector& selector);

/// Counts for one tournament, or the aggregate over several.
struct TournamentScore {
  std::string tournament;
  std::size_t fixtures = 0;
  std::size_t matches_scored = 0;  // fixtures minus model ties
  std::size_t ties_discarded = 0;
  std::size_t model_correct = 0;
  std::size_t bookmaker_correct = 0;
  std::size_t bookmaker_scored = 0;  // scored matches where the odds were not level
  std::size_t rankings_correct = 0;
  std::size_t rankings_scored = 0;  // scored matches with two distinct official ranks

  double model_accuracy() const;
  double bookmaker_accuracy() const;
  double rankings_accuracy() const;
  TournamentScore& operator+=(const TournamentScore& other);
};

/// One evaluated fixture, probabilities given for the eventual winner.
struct ScoredMatch {
  Date date{};
  std::string tournament;
  std::string winner;
  std::string loser;
  std::optional<int> winner_rank;
  std::optional<int> loser_rank;
  double model_p_winner = 0.5;
  double bookmaker_p_winner = 0.5;
  unsigned flags = 0;  // ForecastFlag bits, A = winner, B = loser
  bool tie = false;    // model could not separate the players; not scored
};

struct Outlier {
  ScoredMatch match;
  double gap = 0.0;  // |model - bookmaker| for the winner
};

struct EvaluationReport {
  std::vector<TournamentScore> tournaments;
  TournamentScore aggregate;
  double ratio_score = 0.0;
  double difference_score = 0.0;
  std::vector<Outlier> outliers;
  std::vector<ScoredMatch> matches;
  bool all_converged = true;
};

struct TournamentEvaluation {
  TournamentScore score;
  std::vector<ScoredMatch> matches;
  bool converged = true;
};

/// Trains on records strictly before `cutoff` (default: the first fixture
/// date), fits ratings for the fixtures' surface and scores model,
/// bookmakers and official rankings. Model ties are removed from all three
/// denominators. Throws std::invalid_argument for fixtures before the cutoff.
TournamentEvaluation evaluate_tournament(std::span<const MatchRecord> training,
                                         std::span<const MatchRecord> fixtures,
                                         const ModelParams& params,
                                         const SolverConfig& solver = {},
                                         std::optional<Date> cutoff = std::nullopt);

struct EvaluationSettings {
  ModelParams params;
  SolverConfig solver;
  std::size_t outlier_count = 10;
};

EvaluationReport evaluate(std::span<const MatchRecord> records,
                          std::span<const TournamentSelector> tournaments,
                          const EvaluationSettings& settings);

struct ComparisonScores {
  double ratio = 0.0;       // 100 * (model / bookmaker - 1)
  double difference = 0.0;  // 100 * (model - bookmaker)
};

/// Throws std::invalid_argument if n == 0 or the bookmaker accuracy is 0.
ComparisonScores comparison_scores(std::size_t model_correct, std::size_t bookmaker_correct,
                                   std::size_t n);
ComparisonScores comparison_scores_from_accuracy(double model_accuracy,
                                                 double bookmaker_accuracy);

/// Largest |model - bookmaker| gaps first; stable for equal gaps.
std::vector<Outlier> find_outliers(std::span<const ScoredMatch> matches, std::size_t top_k);

struct LinearFit {
  double pearson_r = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
};

/// Pearson correlation and least-squares line of `model` on `bookmaker`.
/// Throws std::invalid_argument for fewer than 3 points or zero variance.
LinearFit correlation_and_fit(std::span<const double> model_probs,
                              std::span<const double> bookmaker_probs);

struct GridSpec {
  std::vector<double> rho_values;
  std::vector<SurfaceWeightTable> tau_tables;

  /// rho in {0.98, 0.99, 0.995, 0.999} x off-surface weight in {0.2, ..., 1.0}.
  static GridSpec defaults();
  static GridSpec from_off_surface(std::vector<double> rho_values,
                                   const std::vector<double>& off_surface_values);
  /// Points in grid order: rho outer, table inner.
  std::vector<ModelParams> points() const;
};

struct GridPoint {
  ModelParams params;
  TournamentScore score;
  double accuracy = 0.0;
  bool converged = true;
};

struct GridSearchResult {
  std::vector<GridPoint> points;
  std::size_t best_index = 0;

  const GridPoint& best() const { return points.at(best_index); }
};

/// Evaluates every grid point over the validation tournaments (in parallel,
/// `threads` = 0 picks the hardware concurrency). Best = highest aggregate
/// model accuracy, first in grid order on ties.
GridSearchResult grid_search(std::span<const MatchRecord> records,
                             std::span<const TournamentSelector> validation,
                             const GridSpec& grid, const SolverConfig& solver = {},
                             unsigned threads = 0);

}  // namespace oddsrank

#include "oddsrank/evaluator.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "oddsrank/odds_math.hpp"

namespace oddsrank {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

double ratio_or_zero(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

TournamentSelector TournamentSelector::parse(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0)
    throw std::invalid_argument("tournament must look like NAME:YEAR, got '" + std::string(text) +
                                "'");
  TournamentSelector sel;
  sel.name = std::string(text.substr(0, colon));
  try {
    std::size_t used = 0;
    const auto year_text = std::string(text.substr(colon + 1));
    sel.year = std::stoi(year_text, &used);
    if (used != year_text.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw std::invalid_argument("bad year in '" + std::string(text) + "'");
  }
  return sel;
}

std::vector<MatchRecord> select_fixtures(std::span<const MatchRecord> records,
                                         const TournamentSelector& selector) {
  const auto want = lower(selector.name);
  std::vector<MatchRecord> out;
  for (const auto& rec : records)
    if (year_of(rec.date) == selector.year && lower(rec.tournament) == want) out.push_back(rec);
  return out;
}

double TournamentScore::model_accuracy() const {
  return ratio_or_zero(model_correct, matches_scored);
}
double TournamentScore::bookmaker_accuracy() const {
  return ratio_or_zero(bookmaker_correct, bookmaker_scored);
}
double TournamentScore::rankings_accuracy() const {
  return ratio_or_zero(rankings_correct, rankings_scored);
}

TournamentScore& TournamentScore::operator+=(const TournamentScore& o) {
  fixtures += o.fixtures;
  matches_scored += o.matches_scored;
  ties_discarded += o.ties_discarded;
  model_correct += o.model_correct;
  bookmaker_correct += o.bookmaker_correct;
  bookmaker_scored += o.bookmaker_scored;
  rankings_correct += o.rankings_correct;
  rankings_scored += o.rankings_scored;
  return *this;
}

TournamentEvaluation evaluate_tournament(std::span<const MatchRecord> training,
                                         std::span<const MatchRecord> fixtures,
                                         const ModelParams& params, const SolverConfig& solver,
                                         std::optional<Date> cutoff) {
  TournamentEvaluation out;
  if (fixtures.empty()) return out;
  const Tour tour = fixtures.front().tour;
  Date first = fixtures.front().date;
  for (const auto& f : fixtures) {
    if (f.tour != tour) throw std::invalid_argument("fixtures mix ATP and WTA matches");
    first = std::min(first, f.date);
  }
  const Date cut = cutoff.value_or(first);
  if (first < cut)
    throw std::invalid_argument("fixture dated " + format_date(first) + " precedes cutoff " +
                                format_date(cut));

  OddsGraph graph(params.for_target(fixtures.front().surface));
  for (const auto& rec : training)
    if (rec.tour == tour && rec.date < cut) graph.observe_match(rec);
  graph.advance_reference_date(std::max(cut, graph.reference_date()));

  const auto ratings = fit(graph, solver);
  out.converged = ratings.converged;

  const auto& reg = graph.registry();
  std::vector<std::optional<PlayerIndex>> pool;
  for (const auto& f : fixtures) {
    pool.push_back(reg.find(f.winner));
    pool.push_back(reg.find(f.loser));
  }

  auto& score = out.score;
  score.fixtures = fixtures.size();
  for (const auto& f : fixtures) {
    const auto w = reg.find(f.winner);
    const auto l = reg.find(f.loser);
    ScoredMatch m;
    m.date = f.date;
    m.tournament = f.tournament;
    m.winner = f.winner;
    m.loser = f.loser;
    m.winner_rank = f.winner_rank;
    m.loser_rank = f.loser_rank;
    m.bookmaker_p_winner = normalize_odds(f.odds()).first;

    const auto forecast = predict(ratings, w, l, f.best_of, pool);
    m.model_p_winner = forecast.p_a;
    m.flags = forecast.flags;
    const auto pick = predict_winner(ratings, w, l, pool);
    if (pick == Pick::Tie) {
      m.tie = true;
      ++score.ties_discarded;
      out.matches.push_back(std::move(m));
      continue;
    }
    ++score.matches_scored;
    if (pick == Pick::A) ++score.model_correct;

    if (m.bookmaker_p_winner != 0.5) {
      ++score.bookmaker_scored;
      if (m.bookmaker_p_winner > 0.5) ++score.bookmaker_correct;
    }
    if (f.winner_rank && f.loser_rank && *f.winner_rank != *f.loser_rank) {
      ++score.rankings_scored;
      if (*f.winner_rank < *f.loser_rank) ++score.rankings_correct;
    }
    out.matches.push_back(std::move(m));
  }
  return out;
}

EvaluationReport evaluate(std::span<const MatchRecord> records,
                          std::span<const TournamentSelector> tournaments,
                          const EvaluationSettings& settings) {
  EvaluationReport report;
  report.aggregate.tournament = "ALL";
  for (const auto& sel : tournaments) {
    const auto fixtures = select_fixtures(records, sel);
    if (fixtures.empty())
      throw std::invalid_argument("no fixtures found for " + sel.label());
    std::map<Tour, std::vector<MatchRecord>> by_tour;
    for (const auto& f : fixtures) by_tour[f.tour].push_back(f);
    for (const auto& [tour, group] : by_tour) {
      auto result = evaluate_tournament(records, group, settings.params, settings.solver);
      result.score.tournament = sel.label() + " " + std::string(to_string(tour));
      report.aggregate += result.score;
      report.tournaments.push_back(result.score);
      report.all_converged = report.all_converged && result.converged;
      report.matches.insert(report.matches.end(), result.matches.begin(), result.matches.end());
    }
  }
  if (report.aggregate.matches_scored > 0 && report.aggregate.bookmaker_correct > 0) {
    const auto s = comparison_scores_from_accuracy(report.aggregate.model_accuracy(),
                                                   report.aggregate.bookmaker_accuracy());
    report.ratio_score = s.ratio;
    report.difference_score = s.difference;
  }
  std::vector<ScoredMatch> scored;
  for (const auto& m : report.matches)
    if (!m.tie) scored.push_back(m);
  report.outliers = find_outliers(scored, settings.outlier_count);
  return report;
}

ComparisonScores comparison_scores_from_accuracy(double model_accuracy,
                                                 double bookmaker_accuracy) {
  if (!(bookmaker_accuracy > 0.0))
    throw std::invalid_argument("bookmaker accuracy is zero; ratio score undefined");
  return {100.0 * (model_accuracy / bookmaker_accuracy - 1.0),
          100.0 * (model_accuracy - bookmaker_accuracy)};
}

ComparisonScores comparison_scores(std::size_t model_correct, std::size_t bookmaker_correct,
                                   std::size_t n) {
  if (n == 0) throw std::invalid_argument("comparison_scores: no matches");
  const double den = static_cast<double>(n);
  return comparison_scores_from_accuracy(static_cast<double>(model_correct) / den,
                                         static_cast<double>(bookmaker_correct) / den);
}

std::vector<Outlier> find_outliers(std::span<const ScoredMatch> matches, std::size_t top_k) {
  std::vector<Outlier> all;
  all.reserve(matches.size());
  for (const auto& m : matches)
    all.push_back({m, std::abs(m.model_p_winner - m.bookmaker_p_winner)});
  std::stable_sort(all.begin(), all.end(),
                   [](const Outlier& a, const Outlier& b) { return a.gap > b.gap; });
  if (all.size() > top_k) all.resize(top_k);
  return all;
}

LinearFit correlation_and_fit(std::span<const double> model_probs,
                              std::span<const double> bookmaker_probs) {
  if (model_probs.size() != bookmaker_probs.size())
    throw std::invalid_argument("correlation_and_fit: length mismatch");
  const std::size_t n = model_probs.size();
  if (n < 3) throw std::invalid_argument("correlation_and_fit: need at least 3 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += bookmaker_probs[i];
    my += model_probs[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = bookmaker_probs[i] - mx;
    const double dy = model_probs[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0))
    throw std::invalid_argument("correlation_and_fit: degenerate variance");
  LinearFit fit;
  fit.pearson_r = sxy / std::sqrt(sxx * syy);
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

GridSpec GridSpec::defaults() {
  return from_off_surface({0.98, 0.99, 0.995, 0.999}, {0.2, 0.4, 0.6, 0.8, 1.0});
}

GridSpec GridSpec::from_off_surface(std::vector<double> rho_values,
                                    const std::vector<double>& off_surface_values) {
  GridSpec g;
  g.rho_values = std::move(rho_values);
  for (double v : off_surface_values) g.tau_tables.push_back(SurfaceWeightTable::uniform(v));
  return g;
}

std::vector<ModelParams> GridSpec::points() const {
  std::vector<ModelParams> out;
  for (double rho : rho_values)
    for (const auto& table : tau_tables) out.push_back(ModelParams{rho, table});
  return out;
}

GridSearchResult grid_search(std::span<const MatchRecord> records,
                             std::span<const TournamentSelector> validation,
                             const GridSpec& grid, const SolverConfig& solver,
                             unsigned threads) {
  const auto params = grid.points();
  if (params.empty()) throw std::invalid_argument("grid_search: empty grid");
  if (validation.empty()) throw std::invalid_argument("grid_search: no validation tournaments");
  for (const auto& p : params)
    for (auto s : kAllSurfaces) p.for_target(s).validate();

  GridSearchResult result;
  result.points.resize(params.size());
  std::vector<std::exception_ptr> errors(params.size());
  auto run_point = [&](std::size_t i) {
    try {
      EvaluationSettings settings;
      settings.params = params[i];
      settings.solver = solver;
      settings.outlier_count = 0;
      const auto report = evaluate(records, validation, settings);
      result.points[i] = GridPoint{params[i], report.aggregate, report.aggregate.model_accuracy(),
                                   report.all_converged};
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(params.size()));
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < threads; ++t)
      workers.emplace_back([&, t] {
        for (std::size_t i = t; i < params.size(); i += threads) run_point(i);
      });
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (std::size_t i = 1; i < result.points.size(); ++i)
    if (result.points[i].accuracy > result.points[result.best_index].accuracy)
      result.best_index = i;
  return result;
}

}  // namespace oddsrank

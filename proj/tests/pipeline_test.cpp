#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "oddsrank/decay_graph.hpp"
#include "oddsrank/evaluator.hpp"
#include "oddsrank/ingest.hpp"
#include "oddsrank/predictor.hpp"
#include "oddsrank/rating_solver.hpp"
#include "support/synthetic_data.hpp"

namespace oddsrank {
namespace {

double three_set_prob(double diff) { return 1.0 / (1.0 + std::pow(10.0, -diff)); }

/// Set probability whose best-of-3 aggregate is p3, by plain bisection.
double set_prob_for(double p3) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (testing::sets_to_match(mid, 3) < p3 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Odds generated without noise from fixed ratings form a consistent system:
// the fitted ratings must equal the truth up to a constant.
TEST(Pipeline, RecoversRatingsFromNoiselessOdds) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> strength(0.0, 0.4);
  const int n = 12;
  std::vector<double> truth(n);
  for (auto& t : truth) t = strength(rng);

  std::string text = "Date,Tournament,Surface,Best of,Winner,Loser,AvgW,AvgL\n";
  std::uniform_int_distribution<int> who(0, n - 1);
  std::bernoulli_distribution five(0.4);
  for (int m = 0; m < 200; ++m) {
    int a = who(rng), b = who(rng);
    while (b == a) b = who(rng);
    const double p3 = three_set_prob(truth[a] - truth[b]);
    const bool bo5 = five(rng);
    const double p = bo5 ? testing::sets_to_match(set_prob_for(p3), 5) : p3;
    char row[256];
    std::snprintf(row, sizeof row, "2024-%02d-%02d,Event,Hard,%d,%s,%s,%.17g,%.17g\n", 1 + m / 28,
                  1 + m % 28, bo5 ? 5 : 3, testing::synthetic_name(a).c_str(),
                  testing::synthetic_name(b).c_str(), 1.0 / p, 1.0 / (1.0 - p));
    text += row;
  }
  ParseOptions opts;
  opts.ingestion_date = *parse_date("2030-01-01");
  const auto parsed = parse_csv_text(text, Tour::ATP, opts);
  ASSERT_TRUE(parsed.warnings.empty());

  HyperParams params;
  params.rho = 0.97;  // decay reweights observations but cannot bias a consistent system
  params.tau = {1.0, 1.0, 1.0, 1.0};
  const auto graph = build_graph(parsed.records, params);
  const auto r = fit(graph);
  ASSERT_TRUE(r.converged);
  EXPECT_NEAR(r.objective_value, 0.0, 1e-12);

  double mean_truth = 0.0;
  for (int i = 0; i < n; ++i) mean_truth += truth[i];
  mean_truth /= n;
  for (int i = 0; i < n; ++i) {
    const auto idx = graph.registry().find(testing::synthetic_name(i));
    ASSERT_TRUE(idx);
    EXPECT_NEAR(r.ratings[*idx], truth[i] - mean_truth, 1e-6) << testing::synthetic_name(i);
  }

  // Best-of-5 forecasts reproduce the generating probability.
  const std::vector<std::optional<PlayerIndex>> pool;
  const auto a = *graph.registry().find(testing::synthetic_name(0));
  const auto b = *graph.registry().find(testing::synthetic_name(1));
  const auto f = predict(r, a, b, BestOf::Five, pool);
  const double expected = testing::sets_to_match(set_prob_for(three_set_prob(truth[0] - truth[1])), 5);
  EXPECT_NEAR(f.p_a, expected, 1e-6);
}

TEST(Pipeline, SnapshotReloadFitsIdentically) {
  testing::SyntheticSeason season;
  season.players = 40;
  const auto records = parse_csv_text(testing::synthetic_csv(season, true), Tour::ATP).records;
  const auto graph = build_graph(merge_records({records}).records, HyperParams::for_target(Surface::Clay));
  const auto path = std::filesystem::temp_directory_path() / "oddsrank_pipeline.snapshot";
  graph.save_snapshot(path);
  const auto loaded = OddsGraph::load_snapshot(path);
  std::filesystem::remove(path);
  const auto a = fit(graph);
  const auto b = fit(loaded);
  ASSERT_EQ(a.ratings.size(), b.ratings.size());
  for (std::size_t i = 0; i < a.ratings.size(); ++i) EXPECT_NEAR(a.ratings[i], b.ratings[i], 1e-9);
}

TEST(Pipeline, ToursDoNotLeakIntoEachOther) {
  testing::SyntheticSeason season;
  season.players = 40;
  auto atp = parse_csv_text(testing::synthetic_csv(season, true), Tour::ATP).records;
  auto wta = parse_csv_text(testing::synthetic_csv(season, false), Tour::WTA).records;
  // The generators reuse player names across tours, which would merge
  // players if tours were mixed.
  auto both = merge_records({atp, wta}).records;
  const std::vector<TournamentSelector> sel = {{"Wimbledon", 2023}};
  EvaluationSettings settings;
  const auto combined = evaluate(both, sel, settings);
  const auto men = evaluate(merge_records({atp}).records, sel, settings);
  const auto women = evaluate(merge_records({wta}).records, sel, settings);
  ASSERT_EQ(combined.tournaments.size(), 2u);
  EXPECT_EQ(combined.tournaments[0].model_correct, men.aggregate.model_correct);
  EXPECT_EQ(combined.tournaments[1].model_correct, women.aggregate.model_correct);
  EXPECT_EQ(combined.aggregate.matches_scored,
            men.aggregate.matches_scored + women.aggregate.matches_scored);
}

TEST(Pipeline, SyntheticMajorsAreForecastSensibly) {
  testing::SyntheticSeason season;
  season.players = 96;
  season.years = 3;
  auto atp = parse_csv_text(testing::synthetic_csv(season, true), Tour::ATP).records;
  auto wta = parse_csv_text(testing::synthetic_csv(season, false), Tour::WTA).records;
  const auto records = merge_records({atp, wta}).records;
  std::vector<TournamentSelector> majors;
  for (const char* name : {"Australian Open", "French Open", "Wimbledon", "US Open"})
    majors.push_back({name, 2024});
  EvaluationSettings settings;
  const auto report = evaluate(records, majors, settings);
  const auto& a = report.aggregate;
  EXPECT_TRUE(report.all_converged);
  EXPECT_EQ(a.fixtures, 8u * 63u);
  EXPECT_EQ(a.matches_scored + a.ties_discarded, a.fixtures);
  EXPECT_GT(a.model_accuracy(), 0.65);
  EXPECT_LT(std::abs(a.model_accuracy() - a.bookmaker_accuracy()), 0.10);
  std::vector<double> model, book;
  for (const auto& m : report.matches)
    if (!m.tie) {
      model.push_back(m.model_p_winner);
      book.push_back(m.bookmaker_p_winner);
    }
  EXPECT_GT(correlation_and_fit(model, book).pearson_r, 0.7);
}

}  // namespace
}  // namespace oddsrank

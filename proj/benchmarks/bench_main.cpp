#include <benchmark/benchmark.h>

#include <random>

#include "oddsrank/decay_graph.hpp"
#include "oddsrank/evaluator.hpp"
#include "oddsrank/ingest.hpp"
#include "oddsrank/rating_solver.hpp"
#include "support/synthetic_data.hpp"

namespace {

using namespace oddsrank;

std::vector<MatchRecord> season(int players, int years) {
  testing::SyntheticSeason s;
  s.players = players;
  s.years = years;
  return parse_csv_text(testing::synthetic_csv(s, true), Tour::ATP).records;
}

void BM_ParseCsv(benchmark::State& state) {
  testing::SyntheticSeason s;
  s.players = 128;
  s.years = static_cast<int>(state.range(0));
  const auto text = testing::synthetic_csv(s, true);
  for (auto _ : state) benchmark::DoNotOptimize(parse_csv_text(text, Tour::ATP));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_ParseCsv)->Arg(1)->Arg(5);

void BM_ObserveMatch(benchmark::State& state) {
  const auto records = season(128, static_cast<int>(state.range(0)));
  const auto params = HyperParams::for_target(Surface::Grass);
  for (auto _ : state) {
    OddsGraph g(params);
    for (const auto& r : records) g.observe_match(r);
    benchmark::DoNotOptimize(g.edge_count());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * records.size()));
}
BENCHMARK(BM_ObserveMatch)->Arg(1)->Arg(5);

/// Sparse random graph with about `degree` opponents per player.
std::vector<DirectedEdge> random_graph(std::size_t n, std::size_t degree) {
  std::mt19937_64 rng(n);
  std::uniform_int_distribution<std::size_t> who(0, n - 1);
  std::uniform_real_distribution<double> w(0.05, 2.0), x(-1.0, 1.0);
  std::vector<DirectedEdge> edges;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t k = 0; k < degree / 2; ++k) {
      const std::size_t b = who(rng);
      if (b == a) continue;
      const double weight = w(rng), mean = x(rng);
      edges.push_back({a, b, weight, mean});
      edges.push_back({b, a, weight, -mean});
    }
  return edges;
}

void BM_Fit(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto edges = random_graph(n, 20);
  SolverConfig cfg;
  cfg.method = state.range(1) == 0 ? SolverMethod::NormalEquations : SolverMethod::IterativeGradient;
  cfg.max_iterations = 5000;
  int iterations = 0;
  for (auto _ : state) {
    const auto r = fit(n, edges, cfg);
    iterations = r.iterations;
    benchmark::DoNotOptimize(r.objective_value);
  }
  state.counters["solver_iterations"] = iterations;
  state.SetLabel(state.range(1) == 0 ? "conjugate gradient" : "L-BFGS");
}
BENCHMARK(BM_Fit)->ArgsProduct({{100, 1000, 5000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_EvaluateTournament(benchmark::State& state) {
  const auto records = merge_records({season(128, 3)}).records;
  const std::vector<TournamentSelector> sel = {{"Wimbledon", 2024}};
  EvaluationSettings settings;
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(records, sel, settings));
}
BENCHMARK(BM_EvaluateTournament)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();

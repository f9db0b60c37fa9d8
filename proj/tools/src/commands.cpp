#include "oddsrank/cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>

#include "json.hpp"
#include "oddsrank/cli/report.hpp"
#include "oddsrank/csv.hpp"
#include "oddsrank/predictor.hpp"

namespace oddsrank::cli {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::filesystem::path output_file(const RunConfig& cfg, std::string_view stem, Tour tour,
                                  std::string_view ext) {
  return cfg.output_dir / (std::string(stem) + "_" + lower(to_string(tour)) + std::string(ext));
}

void write_warnings(const RunConfig& cfg, const std::vector<std::vector<std::string>>& rows) {
  CsvDocument doc({"file", "row", "message"});
  for (const auto& r : rows) doc.add(r);
  write_text(cfg.output_dir / "ingest_warnings.csv", doc.text());
}

std::string pct(double accuracy) { return num(100.0 * accuracy, 1) + "%"; }

std::string format_row(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// ---- rank ----------------------------------------------------------------

struct RankedPlayer {
  PlayerIndex index = 0;
  double rating = 0.0;
};

std::vector<RankedPlayer> ranked_players(const OddsGraph& graph, const RatingVector& r) {
  std::vector<RankedPlayer> out;
  for (PlayerIndex i = 0; i < graph.player_count(); ++i)
    if (r.solved(i)) out.push_back({i, r.ratings[i]});
  std::sort(out.begin(), out.end(), [&](const RankedPlayer& a, const RankedPlayer& b) {
    if (a.rating != b.rating) return a.rating > b.rating;
    return graph.registry().name(a.index) < graph.registry().name(b.index);
  });
  return out;
}

// ---- predict -------------------------------------------------------------

struct Fixture {
  std::size_t line = 0;
  std::string player_a;
  std::string player_b;
  BestOf best_of = BestOf::Three;
  Surface surface = Surface::Hard;
  std::optional<Tour> tour;
};

std::vector<Fixture> read_fixtures(const std::filesystem::path& path) {
  const auto rows = csv::parse(csv::read_file(path));
  if (rows.empty()) throw DataError(path.string() + ": fixtures file is empty");
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < rows[0].fields.size(); ++i)
    col[lower(csv::trim(rows[0].fields[i]))] = i;
  for (const char* need : {"player_a", "player_b", "best_of", "surface"})
    if (!col.count(need))
      throw DataError(path.string() + ": fixtures file lacks column '" + need + "'");
  const auto tour_col = col.count("tour") ? std::optional(col["tour"]) : std::nullopt;

  std::vector<Fixture> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    auto field = [&](std::size_t c) { return c < f.size() ? csv::trim(f[c]) : std::string(); };
    auto fail = [&](const std::string& what) {
      return DataError(path.string() + ":" + std::to_string(rows[i].line) + ": " + what);
    };
    Fixture fx;
    fx.line = rows[i].line;
    try {
      fx.player_a = canonical_name(field(col["player_a"]));
      fx.player_b = canonical_name(field(col["player_b"]));
    } catch (const std::invalid_argument&) {
      throw fail("blank player name");
    }
    if (fx.player_a == fx.player_b) throw fail("player_a and player_b are the same player");
    const auto fmt = parse_best_of(field(col["best_of"]));
    if (!fmt) throw fail("best_of must be 3 or 5");
    fx.best_of = *fmt;
    const auto surf = parse_surface(field(col["surface"]));
    if (!surf) throw fail("unknown surface '" + field(col["surface"]) + "'");
    fx.surface = *surf;
    if (tour_col) {
      const auto t = parse_tour(field(*tour_col));
      if (!t) throw fail("tour must be ATP or WTA");
      fx.tour = *t;
    }
    out.push_back(std::move(fx));
  }
  return out;
}

// ---- evaluate / anomalies ------------------------------------------------

struct TourReport {
  Tour tour;
  EvaluationReport report;
};

std::vector<TourReport> run_evaluations(const RunConfig& cfg, std::ostream& err,
                                        std::vector<std::vector<std::string>>& warnings) {
  std::vector<bool> matched(cfg.tournaments.size(), false);
  std::vector<TourReport> out;
  for (Tour tour : cfg.active_tours()) {
    const auto data = load_tour(cfg, tour, err, warnings);
    std::vector<TournamentSelector> selected;
    for (std::size_t i = 0; i < cfg.tournaments.size(); ++i) {
      if (select_fixtures(data.records, cfg.tournaments[i]).empty()) continue;
      matched[i] = true;
      selected.push_back(cfg.tournaments[i]);
    }
    if (selected.empty()) continue;
    EvaluationSettings settings{cfg.params, cfg.solver, cfg.outliers};
    out.push_back({tour, evaluate(data.records, selected, settings)});
  }
  for (std::size_t i = 0; i < matched.size(); ++i)
    if (!matched[i]) throw DataError("no fixtures found for " + cfg.tournaments[i].label());
  return out;
}

bool both_known(unsigned flags) { return (flags & (kUnknownPlayerA | kUnknownPlayerB)) == 0; }

std::vector<std::string> score_fields(const TournamentScore& s) {
  return {s.tournament,
          std::to_string(s.fixtures),
          std::to_string(s.matches_scored),
          std::to_string(s.ties_discarded),
          std::to_string(s.model_correct),
          num(s.model_accuracy()),
          std::to_string(s.bookmaker_correct),
          std::to_string(s.bookmaker_scored),
          num(s.bookmaker_accuracy()),
          std::to_string(s.rankings_correct),
          std::to_string(s.rankings_scored),
          num(s.rankings_accuracy())};
}

std::string summary_text(Tour tour, const EvaluationReport& rep, const RunConfig& cfg) {
  std::string s = "Evaluation " + std::string(to_string(tour)) + " (rho " + num(cfg.params.rho, 4) +
                  ", solver " + std::string(to_string(cfg.solver.method)) + ")\n\n";
  s += format_row("%-32s %7s %5s %9s %9s %9s\n", "Tournament", "Scored", "Ties", "Model",
                  "Bookmaker", "Rankings");
  auto line = [&](const TournamentScore& t) {
    s += format_row("%-32s %7zu %5zu %9s %9s %9s\n", t.tournament.c_str(), t.matches_scored,
                    t.ties_discarded, pct(t.model_accuracy()).c_str(),
                    pct(t.bookmaker_accuracy()).c_str(), pct(t.rankings_accuracy()).c_str());
  };
  for (const auto& t : rep.tournaments) line(t);
  line(rep.aggregate);
  const auto& a = rep.aggregate;
  s += "\nModel predicted " + std::to_string(a.model_correct) + "/" +
       std::to_string(a.matches_scored) + " (" + pct(a.model_accuracy()) + "), bookmakers " +
       std::to_string(a.bookmaker_correct) + "/" + std::to_string(a.bookmaker_scored) + " (" +
       pct(a.bookmaker_accuracy()) + "), rankings " + std::to_string(a.rankings_correct) + "/" +
       std::to_string(a.rankings_scored) + " (" + pct(a.rankings_accuracy()) + ").\n";
  s += "Discarded " + std::to_string(a.ties_discarded) + " matches the model could not separate.\n";
  s += "Ratio score " + num(rep.ratio_score, 2) + ", difference score " +
       num(rep.difference_score, 2) + ".\n";
  std::vector<double> model, book;
  for (const auto& m : rep.matches)
    if (!m.tie && both_known(m.flags)) {
      model.push_back(m.model_p_winner);
      book.push_back(m.bookmaker_p_winner);
    }
  try {
    const auto fit = correlation_and_fit(model, book);
    s += "Model vs bookmaker winner probability over " + std::to_string(model.size()) +
         " matches with both players known: r = " + num(fit.pearson_r, 3) + ", y = " +
         num(fit.slope, 3) + "x + " + num(fit.intercept, 3) + ".\n";
  } catch (const std::invalid_argument&) {
    s += "Too few matches with both players known for a correlation.\n";
  }
  if (!rep.all_converged) s += "WARNING: at least one rating fit did not converge.\n";
  return s;
}

void write_evaluation_outputs(const RunConfig& cfg, Tour tour, const EvaluationReport& rep,
                              std::ostream& out) {
  CsvDocument table({"tournament", "fixtures", "matches_scored", "ties_discarded",
                     "model_correct", "model_accuracy", "bookmaker_correct", "bookmaker_scored",
                     "bookmaker_accuracy", "rankings_correct", "rankings_scored",
                     "rankings_accuracy"});
  for (const auto& t : rep.tournaments) table.add(score_fields(t));
  table.add(score_fields(rep.aggregate));
  write_text(output_file(cfg, "evaluation", tour, ".csv"), table.text());

  const auto summary = summary_text(tour, rep, cfg);
  write_text(output_file(cfg, "evaluation", tour, ".txt"), summary);
  out << summary << '\n';

  CsvDocument scatter({"date", "tournament", "winner", "loser", "model_p_winner",
                       "bookmaker_p_winner", "both_known", "tie", "flags"});
  std::vector<ScatterPoint> points;
  for (const auto& m : rep.matches) {
    scatter.add({format_date(m.date), m.tournament, m.winner, m.loser, num(m.model_p_winner),
                 num(m.bookmaker_p_winner), both_known(m.flags) ? "1" : "0", m.tie ? "1" : "0",
                 flags_to_string(m.flags)});
    if (!m.tie) points.push_back({m.bookmaker_p_winner, m.model_p_winner, !both_known(m.flags)});
  }
  write_text(output_file(cfg, "scatter", tour, ".csv"), scatter.text());

  if (cfg.svg) {
    write_text(output_file(cfg, "scatter", tour, ".svg"),
               svg_scatter(points, "Winner probability, " + std::string(to_string(tour)),
                           "Bookmaker probability", "Model probability"));
    std::vector<std::string> names;
    BarSeries model{"Model", {}}, book{"Bookmakers", {}}, ranks{"Rankings", {}};
    for (const auto& t : rep.tournaments) {
      names.push_back(t.tournament);
      model.values.push_back(100.0 * t.model_accuracy());
      book.values.push_back(100.0 * t.bookmaker_accuracy());
      ranks.values.push_back(100.0 * t.rankings_accuracy());
    }
    write_text(output_file(cfg, "evaluation", tour, ".svg"),
               svg_bars(names, {model, book, ranks}, "Results predicted correctly", "Percent"));
  }
}

}  // namespace

LoadedTour load_tour(const RunConfig& cfg, Tour tour, std::ostream& err,
                     std::vector<std::vector<std::string>>& warnings) {
  std::vector<std::vector<MatchRecord>> files;
  std::size_t warning_count = 0;
  for (const auto& src : cfg.data) {
    if (src.tour != tour) continue;
    auto parsed = parse_csv(src.path, tour, cfg.parse);
    for (const auto& w : parsed.warnings) {
      warnings.push_back({src.path.filename().string(), std::to_string(w.row), w.message});
      if (cfg.verbose) err << src.path.string() << ":" << w.row << ": " << w.message << '\n';
    }
    warning_count += parsed.warnings.size();
    files.push_back(std::move(parsed.records));
  }
  auto merged = merge_records(files);
  LoadedTour out{tour, std::move(merged.records), merged.duplicates.size()};
  err << to_string(tour) << ": " << out.records.size() << " records from " << files.size()
      << " file(s), " << warning_count << " row warning(s), " << out.duplicates
      << " duplicate(s) dropped\n";
  if (out.records.empty()) throw DataError("no usable records for tour " + std::string(to_string(tour)));
  return out;
}

int cmd_rank(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate(Command::Rank);
  std::vector<std::vector<std::string>> warnings;
  bool converged = true;
  for (Tour tour : cfg.active_tours()) {
    const auto data = load_tour(cfg, tour, err, warnings);
    const auto graph =
        build_graph(data.records, cfg.params.for_target(cfg.target_surface), cfg.cutoff);
    if (graph.edge_count() == 0)
      throw DataError("no matches before the cutoff for " + std::string(to_string(tour)));
    const auto r = fit(graph, cfg.solver);
    converged = converged && r.converged;
    const auto ranked = ranked_players(graph, r);

    CsvDocument ratings({"player", "rating", "component_id", "n_edges"});
    for (const auto& p : ranked)
      ratings.add({graph.registry().name(p.index), num(p.rating, 10),
                   std::to_string(r.component[p.index]), std::to_string(r.degree[p.index])});
    write_text(output_file(cfg, "ratings", tour, ".csv"), ratings.text());

    // Delta = official rank - model rank, positive when the model rates the
    // player higher than the official list does.
    CsvDocument top({"model_rank", "player", "rating", "official_rank", "rank_delta"});
    std::string table = "Top " + std::to_string(std::min(cfg.top_n, ranked.size())) + " " +
                        std::string(to_string(tour)) + " players on " +
                        std::string(to_string(cfg.target_surface)) + " as of " +
                        format_date(graph.reference_date()) + "\n";
    table += format_row("%5s  %-28s %9s %9s %6s\n", "Rank", "Player", "Rating", "Official", "Delta");
    std::vector<std::string> names;
    BarSeries bars{"Rating", {}};
    for (std::size_t k = 0; k < ranked.size() && k < cfg.top_n; ++k) {
      const auto& p = ranked[k];
      const auto official = graph.registry().latest_rank(p.index);
      const int model_rank = static_cast<int>(k + 1);
      const auto delta = official ? std::optional<int>(*official - model_rank) : std::nullopt;
      const auto& name = graph.registry().name(p.index);
      top.add({std::to_string(model_rank), name, num(p.rating, 10), num(official), num(delta)});
      table += format_row("%5d  %-28s %9s %9s %6s\n", model_rank, name.c_str(),
                          num(p.rating, 4).c_str(), num(official).c_str(),
                          delta ? ((*delta > 0 ? "+" : "") + std::to_string(*delta)).c_str() : "");
      names.push_back(name);
      bars.values.push_back(p.rating);
    }
    write_text(output_file(cfg, "top", tour, ".csv"), top.text());
    out << table << '\n';
    if (cfg.svg)
      write_text(output_file(cfg, "top", tour, ".svg"),
                 svg_bars(names, {bars}, "Top " + std::string(to_string(tour)) + " players", "Rating"));
    if (cfg.save_graph) graph.save_snapshot(output_file(cfg, "graph", tour, ".snapshot"));
    if (!r.converged)
      err << "warning: " << to_string(tour) << " rating fit did not converge after " << r.iterations
          << " iterations\n";
  }
  write_warnings(cfg, warnings);
  return converged ? kExitOk : kExitNotConverged;
}

int cmd_predict(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate(Command::Predict);
  auto fixtures = read_fixtures(*cfg.fixtures);
  const auto tours = cfg.active_tours();
  for (auto& f : fixtures) {
    if (!f.tour) {
      if (tours.size() != 1)
        throw ConfigError("fixtures file has no tour column; select a single tour with --tour");
      f.tour = tours.front();
    } else if (std::find(tours.begin(), tours.end(), *f.tour) == tours.end()) {
      throw DataError("fixture on line " + std::to_string(f.line) + " is for " +
                      std::string(to_string(*f.tour)) + " but no data is loaded for that tour");
    }
  }

  std::vector<std::vector<std::string>> warnings;
  bool converged = true;
  for (Tour tour : tours) {
    std::vector<const Fixture*> mine;
    for (const auto& f : fixtures)
      if (*f.tour == tour) mine.push_back(&f);
    if (mine.empty()) continue;
    const auto data = load_tour(cfg, tour, err, warnings);

    struct Fitted {
      OddsGraph graph;
      RatingVector ratings;
    };
    std::map<Surface, Fitted> fits;
    CsvDocument doc({"player_a", "player_b", "best_of", "surface", "p_a", "p_b", "implied_odds_a",
                     "implied_odds_b", "flags"});
    for (const auto* f : mine) {
      auto it = fits.find(f->surface);
      if (it == fits.end()) {
        auto graph = build_graph(data.records, cfg.params.for_target(f->surface), cfg.cutoff);
        if (graph.edge_count() == 0)
          throw DataError("no matches before the cutoff for " + std::string(to_string(tour)));
        auto ratings = fit(graph, cfg.solver);
        if (!ratings.converged)
          err << "warning: " << to_string(tour) << " " << to_string(f->surface)
              << " rating fit did not converge\n";
        converged = converged && ratings.converged;
        it = fits.emplace(f->surface, Fitted{std::move(graph), std::move(ratings)}).first;
      }
      const auto& reg = it->second.graph.registry();
      std::vector<std::optional<PlayerIndex>> pool;
      for (const auto* g : mine) {
        pool.push_back(reg.find(g->player_a));
        pool.push_back(reg.find(g->player_b));
      }
      const auto fc = predict(it->second.ratings, reg.find(f->player_a), reg.find(f->player_b),
                              f->best_of, pool);
      doc.add({f->player_a, f->player_b, std::to_string(set_count(f->best_of)),
               std::string(to_string(f->surface)), num(fc.p_a, 8), num(fc.p_b, 8),
               num(fc.implied_odds_a, 6), num(fc.implied_odds_b, 6), flags_to_string(fc.flags)});
    }
    const auto path = output_file(cfg, "forecasts", tour, ".csv");
    write_text(path, doc.text());
    out << "Wrote " << doc.rows() << " " << to_string(tour) << " forecasts to " << path.string()
        << '\n';
  }
  write_warnings(cfg, warnings);
  return converged ? kExitOk : kExitNotConverged;
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate(Command::Evaluate);
  std::vector<std::vector<std::string>> warnings;
  bool converged = true;
  for (const auto& [tour, rep] : run_evaluations(cfg, err, warnings)) {
    write_evaluation_outputs(cfg, tour, rep, out);
    converged = converged && rep.all_converged;
  }
  write_warnings(cfg, warnings);
  return converged ? kExitOk : kExitNotConverged;
}

int cmd_anomalies(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate(Command::Anomalies);
  std::vector<std::vector<std::string>> warnings;
  bool converged = true;
  for (const auto& [tour, rep] : run_evaluations(cfg, err, warnings)) {
    CsvDocument doc({"date", "tournament", "winner", "loser", "winner_rank", "loser_rank",
                     "model_p_winner", "bookmaker_p_winner", "gap", "flags"});
    out << "Largest model/bookmaker disagreements, " << to_string(tour) << '\n';
    for (const auto& o : rep.outliers) {
      const auto& m = o.match;
      doc.add({format_date(m.date), m.tournament, m.winner, m.loser, num(m.winner_rank),
               num(m.loser_rank), num(m.model_p_winner), num(m.bookmaker_p_winner), num(o.gap),
               flags_to_string(m.flags)});
      out << format_row("  %s  %-24s d. %-24s model %5s  book %5s  gap %5s %s\n",
                        format_date(m.date).c_str(), m.winner.c_str(), m.loser.c_str(),
                        pct(m.model_p_winner).c_str(), pct(m.bookmaker_p_winner).c_str(),
                        num(o.gap, 3).c_str(), flags_to_string(m.flags).c_str());
    }
    write_text(output_file(cfg, "outliers", tour, ".csv"), doc.text());
    converged = converged && rep.all_converged;
  }
  write_warnings(cfg, warnings);
  return converged ? kExitOk : kExitNotConverged;
}

int cmd_tune(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate(Command::Tune);
  const GridSpec grid = cfg.grid.value_or(GridSpec::defaults());
  std::vector<std::vector<std::string>> warnings;
  std::vector<bool> matched(cfg.tournaments.size(), false);
  bool converged = true;
  for (Tour tour : cfg.active_tours()) {
    const auto data = load_tour(cfg, tour, err, warnings);
    std::vector<TournamentSelector> selected;
    for (std::size_t i = 0; i < cfg.tournaments.size(); ++i) {
      if (select_fixtures(data.records, cfg.tournaments[i]).empty()) continue;
      matched[i] = true;
      selected.push_back(cfg.tournaments[i]);
    }
    if (selected.empty()) continue;
    const auto result = grid_search(data.records, selected, grid, cfg.solver, cfg.threads);

    std::vector<std::string> header = {"point", "rho"};
    for (auto target : kAllSurfaces)
      for (auto played : kAllSurfaces)
        header.push_back("tau_" + lower(to_string(target)) + "_" + lower(to_string(played)));
    for (const char* h : {"fixtures", "matches_scored", "model_correct", "accuracy", "converged", "best"})
      header.emplace_back(h);
    CsvDocument doc(header);
    for (std::size_t i = 0; i < result.points.size(); ++i) {
      const auto& p = result.points[i];
      std::vector<std::string> row = {std::to_string(i), num(p.params.rho, 6)};
      for (auto target : kAllSurfaces)
        for (double w : p.params.tau.row(target)) row.push_back(num(w, 6));
      row.push_back(std::to_string(p.score.fixtures));
      row.push_back(std::to_string(p.score.matches_scored));
      row.push_back(std::to_string(p.score.model_correct));
      row.push_back(num(p.accuracy));
      row.push_back(p.converged ? "1" : "0");
      row.push_back(i == result.best_index ? "1" : "0");
      doc.add(row);
      converged = converged && p.converged;
    }
    write_text(output_file(cfg, "tune", tour, ".csv"), doc.text());

    const auto& best = result.best();
    nlohmann::ordered_json fragment;
    fragment["rho"] = best.params.rho;
    for (auto target : kAllSurfaces)
      for (auto played : kAllSurfaces)
        fragment["surface_weights"][std::string(to_string(target))][std::string(to_string(played))] =
            best.params.tau.row(target)[static_cast<std::size_t>(played)];
    write_text(output_file(cfg, "tune", tour, "_best.json"), fragment.dump(2) + "\n");
    out << to_string(tour) << ": best of " << result.points.size() << " grid points is #"
        << result.best_index << " (rho " << num(best.params.rho, 4) << ") with "
        << best.score.model_correct << "/" << best.score.matches_scored << " correct ("
        << pct(best.accuracy) << ")\n";
  }
  for (std::size_t i = 0; i < matched.size(); ++i)
    if (!matched[i]) throw DataError("no fixtures found for " + cfg.tournaments[i].label());
  write_warnings(cfg, warnings);
  return converged ? kExitOk : kExitNotConverged;
}

int run_command(Command cmd, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  switch (cmd) {
    case Command::Rank: return cmd_rank(cfg, out, err);
    case Command::Predict: return cmd_predict(cfg, out, err);
    case Command::Evaluate: return cmd_evaluate(cfg, out, err);
    case Command::Tune: return cmd_tune(cfg, out, err);
    case Command::Anomalies: return cmd_anomalies(cfg, out, err);
  }
  return kExitFailure;
}

}  // namespace oddsrank::cli

#include "oddsrank/decay_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

#include "oddsrank/odds_math.hpp"

namespace oddsrank {
namespace {

double decay(double rho, long days) { return days == 0 ? 1.0 : std::pow(rho, days); }

std::string hex(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hex(const std::string& token) {
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end != token.c_str() + token.size()) throw DataError("snapshot: bad number '" + token + "'");
  return v;
}

Date parse_snapshot_date(const std::string& token) {
  auto d = parse_date(token);
  if (!d) throw DataError("snapshot: bad date '" + token + "'");
  return *d;
}

}  // namespace

SurfaceWeights default_surface_weights(Surface target) {
  switch (target) {
    case Surface::Grass: return {0.6, 0.3, 1.0, 0.5};
    case Surface::Clay: return {0.6, 1.0, 0.3, 0.4};
    case Surface::Hard: return {1.0, 0.5, 0.4, 0.8};
    case Surface::Carpet: return {0.8, 0.4, 0.5, 1.0};
  }
  return {1.0, 1.0, 1.0, 1.0};
}

SurfaceWeights uniform_off_surface_weights(Surface target, double off_surface) {
  SurfaceWeights w;
  w.fill(off_surface);
  w[static_cast<std::size_t>(target)] = 1.0;
  return w;
}

SurfaceWeightTable SurfaceWeightTable::defaults() {
  SurfaceWeightTable t;
  for (auto s : kAllSurfaces) t.rows[static_cast<std::size_t>(s)] = default_surface_weights(s);
  return t;
}

SurfaceWeightTable SurfaceWeightTable::uniform(double off_surface) {
  SurfaceWeightTable t;
  for (auto s : kAllSurfaces)
    t.rows[static_cast<std::size_t>(s)] = uniform_off_surface_weights(s, off_surface);
  return t;
}

void HyperParams::validate() const {
  if (!(rho > 0.0 && rho <= 1.0)) throw std::invalid_argument("rho must lie in (0, 1]");
  for (double t : tau)
    if (!(t > 0.0) || !std::isfinite(t))
      throw std::invalid_argument("surface weights must be positive");
}

HyperParams HyperParams::for_target(Surface target, double rho) {
  return HyperParams{rho, default_surface_weights(target), target};
}

OddsGraph::OddsGraph(HyperParams params) : params_(params) { params_.validate(); }

void OddsGraph::fold(PlayerIndex a, PlayerIndex b, double weight, double logodds, Date date) {
  auto& e = edges_[key(a, b)];
  const double d = e.total_weight > 0.0 ? decay(params_.rho, days_between(e.last_update, date))
                                        : 1.0;
  e.total_weight = d * e.total_weight + weight;
  e.weighted_logodds_sum = d * e.weighted_logodds_sum + weight * logodds;
  e.last_update = date;
}

void OddsGraph::observe_match(const MatchRecord& rec) {
  if (last_match_date_ && rec.date < *last_match_date_)
    throw OrderingError("match on " + format_date(rec.date) + " arrives after one on " +
                        format_date(*last_match_date_));
  if (rec.winner == rec.loser) throw std::invalid_argument("self-match for " + rec.winner);

  const auto [p_winner, p_loser] = normalize_odds(rec.odds());
  (void)p_loser;
  const double x = impute_three_set_logodds(p_winner, rec.best_of);
  const double w = params_.weight(rec.surface);

  const auto a = registry_.add(rec.winner);
  const auto b = registry_.add(rec.loser);
  if (rec.winner_rank) registry_.record_rank(a, *rec.winner_rank, rec.date);
  if (rec.loser_rank) registry_.record_rank(b, *rec.loser_rank, rec.date);

  fold(a, b, w, x, rec.date);
  fold(b, a, w, -x, rec.date);

  last_match_date_ = rec.date;
  reference_date_ = std::max(reference_date_, rec.date);
}

std::optional<EdgeEstimate> OddsGraph::edge_estimate(PlayerIndex a, PlayerIndex b,
                                                     Date as_of) const {
  const auto* e = raw_edge(a, b);
  if (!e) return std::nullopt;
  const long days = days_between(e->last_update, as_of);
  if (days < 0)
    throw OrderingError("edge queried at " + format_date(as_of) + " before its last update " +
                        format_date(e->last_update));
  return EdgeEstimate{decay(params_.rho, days) * e->total_weight,
                      e->weighted_logodds_sum / e->total_weight};
}

const EdgeStats* OddsGraph::raw_edge(PlayerIndex a, PlayerIndex b) const {
  auto it = edges_.find(key(a, b));
  return it == edges_.end() ? nullptr : &it->second;
}

std::vector<DirectedEdge> OddsGraph::edges() const {
  std::vector<DirectedEdge> out;
  out.reserve(edges_.size());
  for (const auto& [k, e] : edges_) {
    const auto from = static_cast<PlayerIndex>(k >> 32);
    const auto to = static_cast<PlayerIndex>(k & 0xffffffffu);
    out.push_back({from, to,
                   decay(params_.rho, days_between(e.last_update, reference_date_)) *
                       e.total_weight,
                   e.weighted_logodds_sum / e.total_weight});
  }
  std::sort(out.begin(), out.end(), [](const DirectedEdge& x, const DirectedEdge& y) {
    return std::tie(x.from, x.to) < std::tie(y.from, y.to);
  });
  return out;
}

void OddsGraph::advance_reference_date(Date d) {
  if (d < reference_date_)
    throw OrderingError("reference date cannot move back to " + format_date(d));
  reference_date_ = d;
}

void OddsGraph::write_snapshot(std::ostream& out) const {
  out << "oddsrank-graph " << kSnapshotVersion << '\n';
  out << "rho " << hex(params_.rho) << '\n';
  out << "tau";
  for (double t : params_.tau) out << ' ' << hex(t);
  out << '\n';
  out << "target " << to_string(params_.target_surface) << '\n';
  out << "reference " << format_date(reference_date_) << '\n';
  out << "last_match " << (last_match_date_ ? format_date(*last_match_date_) : "-") << '\n';
  out << "players " << registry_.size() << '\n';
  for (PlayerIndex i = 0; i < registry_.size(); ++i) {
    const auto rank = registry_.latest_rank(i);
    const auto rank_date = registry_.latest_rank_date(i);
    out << i << '\t' << (rank ? std::to_string(*rank) : "-") << '\t'
        << (rank_date ? format_date(*rank_date) : "-") << '\t' << registry_.name(i) << '\n';
  }
  std::vector<std::pair<std::uint64_t, EdgeStats>> sorted(edges_.begin(), edges_.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  out << "edges " << sorted.size() << '\n';
  for (const auto& [k, e] : sorted) {
    out << (k >> 32) << ' ' << (k & 0xffffffffu) << ' ' << hex(e.total_weight) << ' '
        << hex(e.weighted_logodds_sum) << ' ' << format_date(e.last_update) << '\n';
  }
  out << "end\n";
}

OddsGraph OddsGraph::read_snapshot(std::istream& in) {
  auto expect = [&](const char* keyword) {
    std::string word;
    if (!(in >> word) || word != keyword)
      throw DataError(std::string("snapshot: expected '") + keyword + "', got '" + word + "'");
  };
  auto next = [&]() {
    std::string token;
    if (!(in >> token)) throw DataError("snapshot: truncated file");
    return token;
  };

  expect("oddsrank-graph");
  const auto version = next();
  if (version != std::to_string(kSnapshotVersion))
    throw DataError("snapshot: unsupported version " + version);

  HyperParams params;
  expect("rho");
  params.rho = parse_hex(next());
  expect("tau");
  for (auto& t : params.tau) t = parse_hex(next());
  expect("target");
  const auto target = parse_surface(next());
  if (!target) throw DataError("snapshot: bad target surface");
  params.target_surface = *target;

  OddsGraph g(params);
  expect("reference");
  g.reference_date_ = parse_snapshot_date(next());
  expect("last_match");
  if (auto token = next(); token != "-") g.last_match_date_ = parse_snapshot_date(token);

  expect("players");
  const auto players = std::stoull(next());
  std::string line;
  std::getline(in, line);
  for (std::size_t i = 0; i < players; ++i) {
    if (!std::getline(in, line)) throw DataError("snapshot: truncated player table");
    std::istringstream fields(line);
    std::string index, rank, rank_date, name;
    std::getline(fields, index, '\t');
    std::getline(fields, rank, '\t');
    std::getline(fields, rank_date, '\t');
    std::getline(fields, name);
    if (index != std::to_string(i) || name.empty())
      throw DataError("snapshot: corrupt player row '" + line + "'");
    const auto idx = g.registry_.add(name);
    if (rank != "-") g.registry_.record_rank(idx, std::stoi(rank), parse_snapshot_date(rank_date));
  }

  expect("edges");
  const auto count = std::stoull(next());
  for (std::size_t i = 0; i < count; ++i) {
    const auto a = std::stoull(next());
    const auto b = std::stoull(next());
    EdgeStats e;
    e.total_weight = parse_hex(next());
    e.weighted_logodds_sum = parse_hex(next());
    e.last_update = parse_snapshot_date(next());
    if (a >= players || b >= players || a == b || !(e.total_weight > 0.0))
      throw DataError("snapshot: corrupt edge record");
    g.edges_[key(a, b)] = e;
  }
  expect("end");
  return g;
}

void OddsGraph::save_snapshot(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_snapshot(out);
}

OddsGraph OddsGraph::load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return read_snapshot(in);
  } catch (const std::invalid_argument&) {
    throw DataError("snapshot: corrupt numeric field in " + path.string());
  } catch (const std::out_of_range&) {
    throw DataError("snapshot: corrupt numeric field in " + path.string());
  }
}

OddsGraph build_graph(const std::vector<MatchRecord>& records, const HyperParams& params,
                      std::optional<Date> cutoff) {
  OddsGraph g(params);
  for (const auto& rec : records) {
    if (cutoff && rec.date >= *cutoff) continue;
    g.observe_match(rec);
  }
  if (cutoff) g.advance_reference_date(std::max(*cutoff, g.reference_date()));
  return g;
}

}  // namespace oddsrank

#include "oddsrank/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

#include "oddsrank/csv.hpp"

namespace oddsrank {
namespace {

struct Columns {
  std::unordered_map<std::string, std::size_t> by_name;

  std::optional<std::size_t> find(const std::string& name) const {
    auto it = by_name.find(name);
    if (it == by_name.end()) return std::nullopt;
    return it->second;
  }
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string field_at(const csv::Row& row, std::optional<std::size_t> column) {
  if (!column || *column >= row.fields.size()) return {};
  return csv::trim(row.fields[*column]);
}

std::optional<double> parse_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<int> parse_rank(const std::string& text) {
  auto v = parse_number(text);
  if (!v || *v < 1.0 || *v != std::floor(*v) || *v > 1e7) return std::nullopt;
  return static_cast<int>(*v);
}

std::optional<DecimalOddsPair> odds_from(const csv::Row& row, const Columns& cols,
                                         const std::string& prefix) {
  auto w = parse_number(field_at(row, cols.find(lower(prefix + "W"))));
  auto l = parse_number(field_at(row, cols.find(lower(prefix + "L"))));
  if (!w || !l) return std::nullopt;
  DecimalOddsPair pair{*w, *l};
  if (!valid_odds(pair)) return std::nullopt;
  return pair;
}

Date today() {
  return std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now());
}

std::string recase_token(const std::string& token) {
  bool has_lower = false, has_upper = false;
  for (unsigned char c : token) {
    has_lower |= std::islower(c) != 0;
    has_upper |= std::isupper(c) != 0;
  }
  if (has_lower && has_upper) return token;
  std::string out = token;
  bool start = true;
  for (auto& ch : out) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalpha(c)) {
      ch = static_cast<char>(start ? std::toupper(c) : std::tolower(c));
      start = false;
    } else {
      start = ch == '.' || ch == '-' || ch == '\'';
    }
  }
  return out;
}

}  // namespace

std::string canonical_name(std::string_view raw) {
  std::istringstream in{std::string(raw)};
  std::string token, out;
  while (in >> token) {
    if (!out.empty()) out.push_back(' ');
    out += recase_token(token);
  }
  if (out.empty()) throw std::invalid_argument("canonical_name: empty player name");
  return out;
}

ParseResult parse_csv(const std::filesystem::path& path, Tour tour, const ParseOptions& options) {
  if (!std::filesystem::exists(path)) throw DataError("missing file " + path.string());
  try {
    return parse_csv_text(csv::read_file(path), tour, options);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

ParseResult parse_csv_text(std::string_view text, Tour tour, const ParseOptions& options) {
  auto rows = csv::parse(text);
  if (rows.empty()) throw DataError("no header row");

  Columns cols;
  for (std::size_t i = 0; i < rows.front().fields.size(); ++i)
    cols.by_name.emplace(lower(csv::trim(rows.front().fields[i])), i);

  std::vector<std::string> missing;
  for (const char* name : {"Date", "Surface", "Winner", "Loser", "Best of"})
    if (!cols.find(lower(name))) missing.emplace_back(name);
  if (!missing.empty()) {
    std::string msg = "missing mandatory columns:";
    for (const auto& m : missing) msg += " '" + m + "'";
    throw DataError(msg);
  }

  const auto c_date = cols.find("date");
  const auto c_surface = cols.find("surface");
  const auto c_winner = cols.find("winner");
  const auto c_loser = cols.find("loser");
  const auto c_best_of = cols.find("best of");
  const auto c_tournament = cols.find("tournament");
  const auto c_wrank = cols.find("wrank");
  const auto c_lrank = cols.find("lrank");
  const auto c_comment = cols.find("comment");
  const Date latest = options.ingestion_date.value_or(today());

  ParseResult result;
  result.data_rows = rows.size() - 1;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto warn = [&](std::string msg) { result.warnings.push_back({row.line, std::move(msg)}); };

    MatchRecord rec;
    rec.tour = tour;
    const auto date = parse_date(field_at(row, c_date));
    if (!date) {
      warn("unparseable date '" + field_at(row, c_date) + "'");
      continue;
    }
    if (*date > latest) {
      warn("date " + format_date(*date) + " is in the future");
      continue;
    }
    rec.date = *date;

    const auto surface = parse_surface(field_at(row, c_surface));
    if (!surface) {
      warn("unknown surface '" + field_at(row, c_surface) + "'");
      continue;
    }
    rec.surface = *surface;

    const auto best_of = parse_best_of(field_at(row, c_best_of));
    if (!best_of) {
      warn("invalid best-of '" + field_at(row, c_best_of) + "'");
      continue;
    }
    rec.best_of = *best_of;

    const auto winner_raw = field_at(row, c_winner);
    const auto loser_raw = field_at(row, c_loser);
    if (winner_raw.empty() || loser_raw.empty()) {
      warn("missing player name");
      continue;
    }
    rec.winner = canonical_name(winner_raw);
    rec.loser = canonical_name(loser_raw);
    if (rec.winner == rec.loser) {
      warn("winner and loser are the same player '" + rec.winner + "'");
      continue;
    }

    auto odds = odds_from(row, cols, "Avg");
    if (!odds) odds = odds_from(row, cols, options.fallback_book);
    if (!odds) {
      warn("no valid odds in Avg or " + options.fallback_book + " columns");
      continue;
    }
    rec.winner_odds = odds->odds_a;
    rec.loser_odds = odds->odds_b;

    const auto comment = lower(field_at(row, c_comment));
    rec.completed = comment.empty() || comment == "completed";
    if (!rec.completed && options.exclude_incomplete) {
      warn("incomplete match excluded (" + comment + ")");
      continue;
    }

    rec.tournament = field_at(row, c_tournament);
    rec.winner_rank = parse_rank(field_at(row, c_wrank));
    rec.loser_rank = parse_rank(field_at(row, c_lrank));
    result.records.push_back(std::move(rec));
  }
  return result;
}

MergeResult merge_records(const std::vector<std::vector<MatchRecord>>& files) {
  MergeResult out;
  for (const auto& file : files) out.records.insert(out.records.end(), file.begin(), file.end());
  std::stable_sort(out.records.begin(), out.records.end(),
                   [](const MatchRecord& a, const MatchRecord& b) { return a.date < b.date; });

  using Key = std::tuple<Tour, Date, std::string, std::string, std::string>;
  std::set<Key> seen;
  std::vector<MatchRecord> kept;
  kept.reserve(out.records.size());
  for (auto& rec : out.records) {
    if (!seen.emplace(rec.tour, rec.date, rec.winner, rec.loser, rec.tournament).second) {
      out.duplicates.push_back(format_date(rec.date) + " " + rec.tournament + ": " + rec.winner +
                               " d. " + rec.loser);
      continue;
    }
    kept.push_back(std::move(rec));
  }
  out.records = std::move(kept);
  return out;
}

PlayerIndex PlayerRegistry::add(const std::string& name) {
  auto [it, inserted] = index_.emplace(name, names_.size());
  if (inserted) {
    names_.push_back(name);
    ranks_.emplace_back();
  }
  return it->second;
}

std::optional<PlayerIndex> PlayerRegistry::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void PlayerRegistry::record_rank(PlayerIndex index, int rank, Date date) {
  auto& slot = ranks_.at(index);
  if (!slot || slot->date <= date) slot = RankSeen{rank, date};
}

std::optional<int> PlayerRegistry::latest_rank(PlayerIndex index) const {
  const auto& slot = ranks_.at(index);
  if (!slot) return std::nullopt;
  return slot->rank;
}

std::optional<Date> PlayerRegistry::latest_rank_date(PlayerIndex index) const {
  const auto& slot = ranks_.at(index);
  if (!slot) return std::nullopt;
  return slot->date;
}

PlayerRegistry build_registry(const std::vector<MatchRecord>& records) {
  PlayerRegistry registry;
  for (const auto& rec : records) {
    const auto w = registry.add(rec.winner);
    const auto l = registry.add(rec.loser);
    if (rec.winner_rank) registry.record_rank(w, *rec.winner_rank, rec.date);
    if (rec.loser_rank) registry.record_rank(l, *rec.loser_rank, rec.date);
  }
  return registry;
}

}  // namespace oddsrank

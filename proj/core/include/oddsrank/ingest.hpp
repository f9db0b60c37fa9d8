#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "oddsrank/odds_math.hpp"
#include "oddsrank/types.hpp"

namespace oddsrank {

/// One historical head-to-head match with pre-match decimal odds.
struct MatchRecord {
  Date date{};
  std::string tournament;
  Surface surface = Surface::Hard;
  BestOf best_of = BestOf::Three;
  std::string winner;
  std::string loser;
  double winner_odds = 0.0;
  double loser_odds = 0.0;
  std::optional<int> winner_rank;
  std::optional<int> loser_rank;
  Tour tour = Tour::ATP;
  /// False for retirements, walkovers and other incomplete matches.
  bool completed = true;

  DecimalOddsPair odds() const { return {winner_odds, loser_odds}; }
};

struct RowWarning {
  std::size_t row = 0;  // 1-based line number in the file, header is row 1
  std::string message;
};

struct ParseOptions {
  /// Bookmaker prefix used when the AvgW/AvgL columns are missing or empty.
  std::string fallback_book = "B365";
  bool exclude_incomplete = false;
  /// Rows dated after this are rejected. Defaults to the current date.
  std::optional<Date> ingestion_date;
};

struct ParseResult {
  std::vector<MatchRecord> records;
  std::vector<RowWarning> warnings;
  /// Non-empty lines after the header.
  std::size_t data_rows = 0;
};

/// Parses a tennis-data.co.uk style CSV. Throws DataError if the file cannot
/// be read or mandatory columns (Date, Surface, Winner, Loser, Best of) are
/// absent; every other problem is reported per row as a warning.
ParseResult parse_csv(const std::filesystem::path& path, Tour tour,
                      const ParseOptions& options = {});
ParseResult parse_csv_text(std::string_view text, Tour tour, const ParseOptions& options = {});

/// Canonical "Surname I." form: trimmed, single spaces, and all-lower or
/// all-upper tokens re-cased to Capitalised. Mixed-case tokens ("McDonald")
/// are kept. Idempotent. Throws std::invalid_argument on blank input.
std::string canonical_name(std::string_view raw);

struct MergeResult {
  std::vector<MatchRecord> records;
  std::vector<std::string> duplicates;
};

/// Concatenates files in the given order, stable-sorts by date and drops
/// repeated (tour, date, winner, loser, tournament) fixtures.
MergeResult merge_records(const std::vector<std::vector<MatchRecord>>& files);

/// Dense player index <-> canonical name, plus the latest official rank
/// observed for each player.
class PlayerRegistry {
 public:
  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }

  /// Returns the existing index or appends a new player.
  PlayerIndex add(const std::string& name);
  std::optional<PlayerIndex> find(const std::string& name) const;
  const std::string& name(PlayerIndex index) const { return names_.at(index); }
  const std::vector<std::string>& names() const { return names_; }

  /// Keeps the rank with the latest date; equal dates overwrite.
  void record_rank(PlayerIndex index, int rank, Date date);
  std::optional<int> latest_rank(PlayerIndex index) const;
  std::optional<Date> latest_rank_date(PlayerIndex index) const;

 private:
  struct RankSeen {
    int rank = 0;
    Date date{};
  };
  std::vector<std::string> names_;
  std::vector<std::optional<RankSeen>> ranks_;
  std::unordered_map<std::string, PlayerIndex> index_;
};

/// Indexes players in first-appearance order (winner before loser).
PlayerRegistry build_registry(const std::vector<MatchRecord>& records);

}  // namespace oddsrank

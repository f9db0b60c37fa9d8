#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <filesystem>
#include <optional>
#include <unordered_map>
#include <vector>

#include "oddsrank/ingest.hpp"
#include "oddsrank/types.hpp"

namespace oddsrank {

/// Weight of a match played on each surface, for one prediction surface.
using SurfaceWeights = std::array<double, kSurfaceCount>;

/// Placeholder off-surface weights used until a grid search picks better ones.
SurfaceWeights default_surface_weights(Surface target);
/// Weight 1 on `target`, `off_surface` everywhere else.
SurfaceWeights uniform_off_surface_weights(Surface target, double off_surface);

struct HyperParams {
  /// Per-day decay factor in (0, 1].
  double rho = 0.995;
  SurfaceWeights tau = default_surface_weights(Surface::Hard);
  Surface target_surface = Surface::Hard;

  double weight(Surface played) const { return tau[static_cast<std::size_t>(played)]; }
  /// Throws std::invalid_argument if rho or any tau is out of range.
  void validate() const;
  static HyperParams for_target(Surface target, double rho = 0.995);
};

/// Surface weights for every prediction surface: rows[target][played].
struct SurfaceWeightTable {
  std::array<SurfaceWeights, kSurfaceCount> rows;

  const SurfaceWeights& row(Surface target) const {
    return rows[static_cast<std::size_t>(target)];
  }
  static SurfaceWeightTable defaults();
  static SurfaceWeightTable uniform(double off_surface);
};

/// rho plus a weight table; yields HyperParams for any target surface.
struct ModelParams {
  double rho = 0.995;
  SurfaceWeightTable tau = SurfaceWeightTable::defaults();

  HyperParams for_target(Surface target) const { return HyperParams{rho, tau.row(target), target}; }
};

struct EdgeStats {
  double total_weight = 0.0;
  /// Sum of weight * log-odds, decayed to last_update.
  double weighted_logodds_sum = 0.0;
  Date last_update{};
};

struct EdgeEstimate {
  double weight = 0.0;  // decayed W_ab
  double mean = 0.0;    // E_ab
};

/// A stored directed edge decayed to a common date.
struct DirectedEdge {
  PlayerIndex from = 0;
  PlayerIndex to = 0;
  double weight = 0.0;
  double mean = 0.0;
};

struct OrderingError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Directed graph of time-decayed, surface-weighted log-odds. The complete
/// graph is stored sparsely: an absent edge has zero weight. Each match
/// updates both directions, so W_ab == W_ba and E_ab == -E_ba.
///
/// Not thread-safe for writes; concurrent const access is fine.
class OddsGraph {
 public:
  explicit OddsGraph(HyperParams params);

  /// Folds one match into both directed edges in O(1). Matches must arrive in
  /// nondecreasing date order (OrderingError otherwise). New players are
  /// registered automatically.
  void observe_match(const MatchRecord& rec);

  /// Decayed weight and mean of a -> b as of `as_of`, or nullopt if the pair
  /// never met. Throws OrderingError if as_of precedes the edge's last update.
  std::optional<EdgeEstimate> edge_estimate(PlayerIndex a, PlayerIndex b, Date as_of) const;
  std::optional<EdgeEstimate> edge_estimate(PlayerIndex a, PlayerIndex b) const {
    return edge_estimate(a, b, reference_date_);
  }

  /// All stored directed edges decayed to the reference date, sorted by
  /// (from, to).
  std::vector<DirectedEdge> edges() const;

  /// Moves the reference date forward; never backwards.
  void advance_reference_date(Date d);
  Date reference_date() const { return reference_date_; }

  const HyperParams& params() const { return params_; }
  const PlayerRegistry& registry() const { return registry_; }
  PlayerRegistry& registry() { return registry_; }
  std::size_t player_count() const { return registry_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const EdgeStats* raw_edge(PlayerIndex a, PlayerIndex b) const;

  void save_snapshot(const std::filesystem::path& path) const;
  static OddsGraph load_snapshot(const std::filesystem::path& path);
  void write_snapshot(std::ostream& out) const;
  static OddsGraph read_snapshot(std::istream& in);

 private:
  static std::uint64_t key(PlayerIndex a, PlayerIndex b) {
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
  }
  void fold(PlayerIndex a, PlayerIndex b, double weight, double logodds, Date date);

  HyperParams params_;
  PlayerRegistry registry_;
  std::unordered_map<std::uint64_t, EdgeStats> edges_;
  Date reference_date_{};
  std::optional<Date> last_match_date_;
};

/// Convenience: new graph fed with every record dated strictly before
/// `cutoff` (all records if none), reference date set to the cutoff or the
/// last match date.
OddsGraph build_graph(const std::vector<MatchRecord>& records, const HyperParams& params,
                      std::optional<Date> cutoff = std::nullopt);

inline constexpr int kSnapshotVersion = 1;

}  // namespace oddsrank

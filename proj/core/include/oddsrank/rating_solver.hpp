#pragma once

#include <optional>
#include <span>
#include <vector>

#include "oddsrank/decay_graph.hpp"

namespace oddsrank {

enum class SolverMethod {
  /// Jacobi-preconditioned conjugate gradient on the Laplacian system.
  NormalEquations,
  /// Limited-memory BFGS on the objective directly.
  IterativeGradient,
};

struct SolverConfig {
  int max_iterations = 500;
  double gradient_tolerance = 1e-8;
  SolverMethod method = SolverMethod::NormalEquations;

  void validate() const;
};

/// Fitted ratings for one prediction surface. Ratings are base-10 log-odds
/// units; within each connected component they have zero mean.
struct RatingVector {
  std::vector<double> ratings;
  /// Component label: smallest player index in the component.
  std::vector<PlayerIndex> component;
  /// Number of distinct opponents with positive weight.
  std::vector<std::size_t> degree;
  double objective_value = 0.0;
  bool converged = true;
  int iterations = 0;

  std::size_t size() const { return ratings.size(); }
  /// Player has at least one edge, so its rating is informed by data.
  bool solved(PlayerIndex p) const { return p < degree.size() && degree[p] > 0; }
  /// Subtracts the component mean from every rating in each component.
  void enforce_zero_mean();
};

struct MissingRating : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/// f(r) = sum over stored directed edges of W_ab ((r_a - r_b) - E_ab)^2.
double objective(std::span<const DirectedEdge> edges, std::span<const double> ratings);
double objective(const OddsGraph& graph, const RatingVector& r);

/// Analytic gradient of `objective`.
std::vector<double> gradient(std::span<const DirectedEdge> edges, std::span<const double> ratings);
std::vector<double> gradient(const OddsGraph& graph, const RatingVector& r);

/// Labels of the undirected support graph, smallest member index as label.
std::vector<PlayerIndex> connected_components(std::size_t players,
                                              std::span<const DirectedEdge> edges);
std::vector<PlayerIndex> connected_components(const OddsGraph& graph);

/// Minimises the objective. Never throws on non-convergence: the best iterate
/// is returned with converged = false.
RatingVector fit(std::size_t players, std::span<const DirectedEdge> edges,
                 const SolverConfig& cfg = {},
                 const std::optional<RatingVector>& warm_start = std::nullopt);
RatingVector fit(const OddsGraph& graph, const SolverConfig& cfg = {},
                 const std::optional<RatingVector>& warm_start = std::nullopt);

struct RatingLookup {
  double rating = 0.0;
  /// True when the rating came from the fallback rule.
  bool imputed = false;
};

/// Rating of `player`, or for unknown/unsolved players the lowest rating
/// among the solved players in `pool` (the tournament entrants). Throws
/// MissingRating if no such rating exists.
RatingLookup rating_of(const RatingVector& r, std::optional<PlayerIndex> player,
                       std::span<const std::optional<PlayerIndex>> pool);

}  // namespace oddsrank

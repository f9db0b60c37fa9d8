#pragma once

#include <optional>
#include <span>
#include <string>

#include "oddsrank/rating_solver.hpp"

namespace oddsrank {

enum ForecastFlag : unsigned {
  kUnknownPlayerA = 1u << 0,
  kUnknownPlayerB = 1u << 1,
  kCrossComponent = 1u << 2,
};

/// "UnknownPlayerA|CrossComponent" style label, empty when no flag is set.
std::string flags_to_string(unsigned flags);

struct Forecast {
  double p_a = 0.5;
  double p_b = 0.5;
  double implied_odds_a = 2.0;
  double implied_odds_b = 2.0;
  BestOf format = BestOf::Three;
  unsigned flags = 0;
};

/// Win probability for a over b from the rating difference. Unknown players
/// take the fallback rating from `pool`. Best-of-5 probabilities are derived
/// from the best-of-3 probability through the set-level model.
Forecast predict(const RatingVector& r, std::optional<PlayerIndex> a,
                 std::optional<PlayerIndex> b, BestOf fmt,
                 std::span<const std::optional<PlayerIndex>> pool);

enum class Pick { A, B, Tie };

/// Tie when both effective ratings are exactly equal.
Pick predict_winner(const RatingVector& r, std::optional<PlayerIndex> a,
                    std::optional<PlayerIndex> b,
                    std::span<const std::optional<PlayerIndex>> pool);

}  // namespace oddsrank

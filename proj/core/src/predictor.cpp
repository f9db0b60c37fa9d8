#include "oddsrank/predictor.hpp"

#include <algorithm>

#include "oddsrank/odds_math.hpp"

namespace oddsrank {

std::string flags_to_string(unsigned flags) {
  std::string out;
  auto append = [&](unsigned bit, const char* name) {
    if (!(flags & bit)) return;
    if (!out.empty()) out.push_back('|');
    out += name;
  };
  append(kUnknownPlayerA, "UnknownPlayerA");
  append(kUnknownPlayerB, "UnknownPlayerB");
  append(kCrossComponent, "CrossComponent");
  return out;
}

Forecast predict(const RatingVector& r, std::optional<PlayerIndex> a,
                 std::optional<PlayerIndex> b, BestOf fmt,
                 std::span<const std::optional<PlayerIndex>> pool) {
  const auto ra = rating_of(r, a, pool);
  const auto rb = rating_of(r, b, pool);

  Forecast f;
  f.format = fmt;
  if (ra.imputed) f.flags |= kUnknownPlayerA;
  if (rb.imputed) f.flags |= kUnknownPlayerB;
  if (!ra.imputed && !rb.imputed && r.component[*a] != r.component[*b])
    f.flags |= kCrossComponent;

  const double p3 = std::clamp(logodds_to_prob(ra.rating - rb.rating), kProbabilityClamp,
                              1.0 - kProbabilityClamp);
  f.p_a = reformat_match_prob(p3, fmt);
  f.p_b = 1.0 - f.p_a;
  f.implied_odds_a = 1.0 / f.p_a;
  f.implied_odds_b = 1.0 / f.p_b;
  return f;
}

Pick predict_winner(const RatingVector& r, std::optional<PlayerIndex> a,
                    std::optional<PlayerIndex> b,
                    std::span<const std::optional<PlayerIndex>> pool) {
  const double ra = rating_of(r, a, pool).rating;
  const double rb = rating_of(r, b, pool).rating;
  if (ra > rb) return Pick::A;
  if (rb > ra) return Pick::B;
  return Pick::Tie;
}

}  // namespace oddsrank

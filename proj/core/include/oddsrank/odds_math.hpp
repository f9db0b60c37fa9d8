#pragma once

// Conversions between decimal odds, win probabilities, base-10 log-odds and
// ratings, plus best-of-3 / best-of-5 re-aggregation under independent sets.
// All functions are pure.

#include <stdexcept>
#include <utility>

#include "oddsrank/types.hpp"

namespace oddsrank {

struct InvalidOdds : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DecimalOddsPair {
  double odds_a = 0.0;
  double odds_b = 0.0;
};

/// Both odds finite and strictly greater than 1.
bool valid_odds(const DecimalOddsPair& pair);

/// Removes the bookmaker margin by normalising the implied probabilities
/// 1/odds so they sum to one. Returns (p_a, p_b).
std::pair<double, double> normalize_odds(const DecimalOddsPair& pair);

inline constexpr double kProbabilityClamp = 1e-6;

/// x = log10(p / (1 - p)); equals r_a - r_b under the rating link.
/// p is clamped to [1e-6, 1 - 1e-6]. Throws std::domain_error outside (0, 1).
double prob_to_logodds(double p);

/// p = 1 / (1 + 10^-x). Throws std::domain_error for non-finite x.
double logodds_to_prob(double x);

/// P(Bin(n_sets, xi) > n_sets / 2).
double match_prob_from_set_prob(double xi, BestOf fmt);

/// Inverse of match_prob_from_set_prob, by bisection on [1e-9, 1 - 1e-9].
double set_prob_from_match_prob(double p, BestOf fmt);

/// Log-odds of the equivalent best-of-3 match. Best-of-5 probabilities are
/// mapped to a set probability first and re-aggregated over three sets.
double impute_three_set_logodds(double p_match, BestOf fmt);

/// Converts a best-of-3 match probability to the probability for `fmt`.
double reformat_match_prob(double p_three, BestOf fmt);

}  // namespace oddsrank

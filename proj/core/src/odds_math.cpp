#include "oddsrank/odds_math.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace oddsrank {
namespace {

void require_probability(double p, const char* what) {
  if (!(p > 0.0 && p < 1.0)) {
    std::ostringstream msg;
    msg << what << ": probability " << p << " outside (0, 1)";
    throw std::domain_error(msg.str());
  }
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

bool valid_odds(const DecimalOddsPair& pair) {
  return std::isfinite(pair.odds_a) && std::isfinite(pair.odds_b) && pair.odds_a > 1.0 &&
         pair.odds_b > 1.0;
}

std::pair<double, double> normalize_odds(const DecimalOddsPair& pair) {
  for (double odds : {pair.odds_a, pair.odds_b}) {
    if (!std::isfinite(odds) || odds <= 1.0) {
      std::ostringstream msg;
      msg << "invalid decimal odds " << odds << " (must be finite and > 1)";
      throw InvalidOdds(msg.str());
    }
  }
  const double implied_a = 1.0 / pair.odds_a;
  const double implied_b = 1.0 / pair.odds_b;
  const double p_a = implied_a / (implied_a + implied_b);
  return {p_a, 1.0 - p_a};
}

double prob_to_logodds(double p) {
  require_probability(p, "prob_to_logodds");
  p = std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
  return std::log10(p / (1.0 - p));
}

double logodds_to_prob(double x) {
  if (!std::isfinite(x)) throw std::domain_error("logodds_to_prob: non-finite log-odds");
  return 1.0 / (1.0 + std::pow(10.0, -x));
}

double match_prob_from_set_prob(double xi, BestOf fmt) {
  require_probability(xi, "match_prob_from_set_prob");
  const int n = set_count(fmt);
  double total = 0.0;
  for (int k = n / 2 + 1; k <= n; ++k)
    total += binomial(n, k) * std::pow(xi, k) * std::pow(1.0 - xi, n - k);
  return total;
}

double set_prob_from_match_prob(double p, BestOf fmt) {
  require_probability(p, "set_prob_from_match_prob");
  double lo = 1e-9;
  double hi = 1.0 - 1e-9;
  for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (match_prob_from_set_prob(mid, fmt) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double impute_three_set_logodds(double p_match, BestOf fmt) {
  if (fmt == BestOf::Three) return prob_to_logodds(p_match);
  const double xi = set_prob_from_match_prob(p_match, fmt);
  return prob_to_logodds(match_prob_from_set_prob(xi, BestOf::Three));
}

double reformat_match_prob(double p_three, BestOf fmt) {
  if (fmt == BestOf::Three) return p_three;
  const double xi = set_prob_from_match_prob(p_three, BestOf::Three);
  return match_prob_from_set_prob(xi, fmt);
}

}  // namespace oddsrank

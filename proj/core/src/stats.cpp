#include "oddsrank/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace oddsrank::stats {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double one_sample_proportion_p_value(std::size_t successes, std::size_t n,
                                     double null_proportion) {
  if (n == 0 || !(null_proportion > 0.0 && null_proportion < 1.0))
    throw std::invalid_argument("one_sample_proportion_p_value: bad arguments");
  const double p_hat = static_cast<double>(successes) / static_cast<double>(n);
  const double se = std::sqrt(null_proportion * (1.0 - null_proportion) / static_cast<double>(n));
  const double z = (p_hat - null_proportion) / se;
  return 2.0 * normal_cdf(-std::abs(z));
}

double two_proportion_p_value(std::size_t successes_a, std::size_t n_a,
                              std::size_t successes_b, std::size_t n_b) {
  if (n_a == 0 || n_b == 0) throw std::invalid_argument("two_proportion_p_value: empty sample");
  const double pa = static_cast<double>(successes_a) / static_cast<double>(n_a);
  const double pb = static_cast<double>(successes_b) / static_cast<double>(n_b);
  const double pooled = static_cast<double>(successes_a + successes_b) /
                        static_cast<double>(n_a + n_b);
  const double se = std::sqrt(pooled * (1.0 - pooled) *
                              (1.0 / static_cast<double>(n_a) + 1.0 / static_cast<double>(n_b)));
  if (!(se > 0.0)) return 1.0;
  return 2.0 * normal_cdf(-std::abs((pa - pb) / se));
}

}  // namespace oddsrank::stats

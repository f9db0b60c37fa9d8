#pragma once

#include <cstddef>

namespace oddsrank::stats {

/// Standard normal CDF.
double normal_cdf(double z);

/// Two-sided z test of `successes` / n against a fixed null proportion.
double one_sample_proportion_p_value(std::size_t successes, std::size_t n,
                                     double null_proportion);

/// Two-sided pooled z test for two independent samples.
double two_proportion_p_value(std::size_t successes_a, std::size_t n_a,
                              std::size_t successes_b, std::size_t n_b);

}  // namespace oddsrank::stats

#include "oddsrank/predictor.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "oddsrank/odds_math.hpp"

namespace oddsrank {
namespace {

RatingVector make_ratings(std::vector<double> values, std::vector<PlayerIndex> component = {}) {
  RatingVector r;
  r.ratings = std::move(values);
  r.degree.assign(r.ratings.size(), 1);
  if (component.empty()) component.assign(r.ratings.size(), 0);
  r.component = std::move(component);
  return r;
}

const std::vector<std::optional<PlayerIndex>> kNoPool;

TEST(Predict, Examples) {
  const auto r = make_ratings({0.25, 0.25, -0.75});
  const auto even = predict(r, 0, 1, BestOf::Three, kNoPool);
  EXPECT_DOUBLE_EQ(even.p_a, 0.5);
  EXPECT_EQ(even.flags, 0u);

  const auto three = predict(r, 0, 2, BestOf::Three, kNoPool);
  EXPECT_NEAR(three.p_a, 10.0 / 11.0, 1e-15);
  EXPECT_NEAR(three.p_b, 1.0 / 11.0, 1e-15);
  EXPECT_NEAR(three.implied_odds_a, 1.1, 1e-14);
  EXPECT_NEAR(three.implied_odds_b, 11.0, 1e-12);

  // 10/11 -> set probability by bisection -> best-of-5 binomial (mpmath value).
  const auto five = predict(r, 0, 2, BestOf::Five, kNoPool);
  EXPECT_NEAR(five.p_a, 0.952275928806512286, 1e-10);
  EXPECT_GT(five.p_a, three.p_a);
  EXPECT_EQ(five.format, BestOf::Five);
}

TEST(Predict, FlagsUnknownAndCrossComponent) {
  auto r = make_ratings({0.5, -0.5, 0.1, -0.1}, {0, 0, 2, 2});
  r.degree[3] = 0;
  const std::vector<std::optional<PlayerIndex>> pool = {0, 1, 2, 3, std::nullopt};
  const auto cross = predict(r, 0, 2, BestOf::Three, pool);
  EXPECT_EQ(cross.flags, kCrossComponent);
  const auto unknown = predict(r, std::nullopt, 3, BestOf::Three, pool);
  EXPECT_EQ(unknown.flags, kUnknownPlayerA | kUnknownPlayerB);
  EXPECT_DOUBLE_EQ(unknown.p_a, 0.5);
  EXPECT_EQ(flags_to_string(unknown.flags), "UnknownPlayerA|UnknownPlayerB");
  EXPECT_EQ(flags_to_string(0), "");
  const auto b_unknown = predict(r, 0, std::nullopt, BestOf::Three, pool);
  EXPECT_EQ(b_unknown.flags, kUnknownPlayerB);
  EXPECT_NEAR(b_unknown.p_a, logodds_to_prob(1.0), 1e-15);
  EXPECT_THROW(predict(r, std::nullopt, 0, BestOf::Three, kNoPool), MissingRating);
}

TEST(Predict, Invariants) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    const auto r = make_ratings({val(rng), val(rng)});
    for (auto fmt : {BestOf::Three, BestOf::Five}) {
      const auto ab = predict(r, 0, 1, fmt, kNoPool);
      const auto ba = predict(r, 1, 0, fmt, kNoPool);
      EXPECT_NEAR(ab.p_a + ba.p_a, 1.0, 1e-12);
      EXPECT_NEAR(ab.p_a + ab.p_b, 1.0, 1e-15);
      EXPECT_NEAR(ab.implied_odds_a, 1.0 / ab.p_a, 1e-12);
    }
    const auto p3 = predict(r, 0, 1, BestOf::Three, kNoPool).p_a;
    const auto p5 = predict(r, 0, 1, BestOf::Five, kNoPool).p_a;
    if (p3 > 0.5) EXPECT_GE(p5, p3);
    if (p3 < 0.5) EXPECT_LE(p5, p3);
  }
}

TEST(Predict, GaugeShiftIsBitIdentical) {
  // Dyadic ratings keep rating differences exact under the shift.
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> ticks(-2048, 2048);
  for (int trial = 0; trial < 200; ++trial) {
    const auto r = make_ratings({ticks(rng) / 1024.0, ticks(rng) / 1024.0, ticks(rng) / 1024.0});
    auto shifted = r;
    const double c = ticks(rng) / 256.0;
    for (auto& v : shifted.ratings) v += c;
    for (auto fmt : {BestOf::Three, BestOf::Five}) {
      const auto a = predict(r, 0, 1, fmt, kNoPool);
      const auto b = predict(shifted, 0, 1, fmt, kNoPool);
      EXPECT_EQ(std::bit_cast<std::uint64_t>(a.p_a), std::bit_cast<std::uint64_t>(b.p_a));
      EXPECT_EQ(std::bit_cast<std::uint64_t>(a.implied_odds_b),
                std::bit_cast<std::uint64_t>(b.implied_odds_b));
    }
  }
}

TEST(Predict, ExtremeDifferenceStaysFinite) {
  const auto r = make_ratings({40.0, -40.0});
  const auto f = predict(r, 0, 1, BestOf::Five, kNoPool);
  EXPECT_LT(f.p_a, 1.0);
  EXPECT_TRUE(std::isfinite(f.implied_odds_b));
}

TEST(PredictWinner, Examples) {
  auto r = make_ratings({0.3, -0.3, 0.3});
  r.degree.push_back(0);
  r.ratings.push_back(0.0);
  r.component.push_back(3);
  const std::vector<std::optional<PlayerIndex>> pool = {0, 1, 2, 3, std::nullopt};
  EXPECT_EQ(predict_winner(r, 0, 1, pool), Pick::A);
  EXPECT_EQ(predict_winner(r, 1, 0, pool), Pick::B);
  EXPECT_EQ(predict_winner(r, 0, 2, pool), Pick::Tie);
  EXPECT_EQ(predict_winner(r, std::nullopt, 3, pool), Pick::Tie);
  // An unknown player takes the weakest entrant's rating.
  EXPECT_EQ(predict_winner(r, 1, std::nullopt, pool), Pick::Tie);
  EXPECT_EQ(predict_winner(r, 0, std::nullopt, pool), Pick::A);
}

}  // namespace
}  // namespace oddsrank

#include <gtest/gtest.h>

#include <algorithm>
#include <boost/rational.hpp>
#include <cmath>
#include <numeric>
#include <random>

#include "lvsie/softlabel.hpp"

using namespace lvsie;
using Rational = boost::rational<long long>;

namespace {

Rational mass(Agreement a) {
  switch (a) {
    case Agreement::kHigh: return {9, 10};
    case Agreement::kMedium: return {8, 10};
    case Agreement::kLow: return {6, 10};
  }
  return {0, 1};
}

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> v(k);
  for (auto& x : v) x = u(rng);
  const double s = std::accumulate(v.begin(), v.end(), 0.0);
  for (auto& x : v) x /= s;
  return v;
}

}  // namespace

TEST(SoftLabel, FiveClassVectorsMatchRationalConstruction) {
  for (auto level : {Agreement::kHigh, Agreement::kMedium, Agreement::kLow}) {
    for (std::size_t target = 0; target < 5; ++target) {
      const SoftLabel s = make_soft_label(target, level, 5);
      const Rational rest = (Rational(1) - mass(level)) / Rational(4);
      for (std::size_t i = 0; i < 5; ++i) {
        const Rational expected = i == target ? mass(level) : rest;
        EXPECT_EQ(s.probs[i], boost::rational_cast<double>(expected)) << "class " << i;
      }
    }
  }
}

TEST(SoftLabel, KnownVectors) {
  const SoftLabel high = make_soft_label(0, Agreement::kHigh, 5);
  EXPECT_EQ(high.probs, (std::vector<double>{0.9, 0.025, 0.025, 0.025, 0.025}));
  const SoftLabel medium = make_soft_label(2, Agreement::kMedium, 5);
  EXPECT_EQ(medium.probs, (std::vector<double>{0.05, 0.05, 0.8, 0.05, 0.05}));
  const SoftLabel low = make_soft_label(4, Agreement::kLow, 5);
  EXPECT_EQ(low.probs, (std::vector<double>{0.1, 0.1, 0.1, 0.1, 0.6}));
}

TEST(SoftLabel, SumsToOneAndArgmaxIsTarget) {
  for (std::size_t k = 2; k <= 20; ++k)
    for (std::size_t t = 0; t < k; ++t)
      for (auto level : {Agreement::kHigh, Agreement::kMedium, Agreement::kLow}) {
        const SoftLabel s = make_soft_label(t, level, k);
        EXPECT_NEAR(std::accumulate(s.probs.begin(), s.probs.end(), 0.0), 1.0, 1e-12);
        const auto arg = std::max_element(s.probs.begin(), s.probs.end()) - s.probs.begin();
        EXPECT_EQ(static_cast<std::size_t>(arg), t);
      }
}

TEST(SoftLabel, RejectsBadArguments) {
  EXPECT_THROW(make_soft_label(0, Agreement::kHigh, 1), Error);
  EXPECT_THROW(make_soft_label(5, Agreement::kHigh, 5), Error);
}

TEST(Divergence, MatchTermByTermLongDoubleOracles) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t k = 2 + static_cast<std::size_t>(trial % 9);
    SoftLabel p;
    p.probs = random_simplex(rng, k);
    PredictionDistribution q{random_simplex(rng, k)};
    long double kl = 0, kli = 0, ce = 0, bce = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const long double a = p.probs[i], b = q.probs[i];
      kl += a * (std::log(a) - std::log(b));
      kli += b * (std::log(b) - std::log(a));
      ce -= a * std::log(b);
      bce -= a * std::log(b) + (1 - a) * std::log1p(-b);
    }
    bce /= static_cast<long double>(k);
    EXPECT_NEAR(kl_standard(p, q), static_cast<double>(kl), 1e-10);
    EXPECT_NEAR(kl_inverse(p, q), static_cast<double>(kli), 1e-10);
    EXPECT_NEAR(soft_loss_ce(p, q), static_cast<double>(ce), 1e-10);
    EXPECT_NEAR(soft_loss_bce(p, q), static_cast<double>(bce), 1e-10);
  }
}

TEST(Divergence, Identities) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    SoftLabel p;
    p.probs = random_simplex(rng, 5);
    const PredictionDistribution same{p.probs};
    EXPECT_NEAR(kl_standard(p, same), 0.0, 1e-9);
    EXPECT_NEAR(kl_inverse(p, same), 0.0, 1e-9);
    const PredictionDistribution q{random_simplex(rng, 5)};
    EXPECT_NEAR(soft_loss_ce(p, q) - kl_standard(p, q), entropy(p.probs), 1e-9);
  }
}

TEST(Divergence, FloorKeepsZeroPredictionsFinite) {
  const SoftLabel p = make_soft_label(0, Agreement::kHigh, 3);
  const PredictionDistribution q{{0.0, 0.5, 0.5}};
  EXPECT_TRUE(std::isfinite(kl_standard(p, q)));
  EXPECT_TRUE(std::isfinite(soft_loss_ce(p, q)));
  EXPECT_NEAR(soft_loss_ce(p, q), -0.9 * std::log(kProbFloor) - 0.1 * std::log(0.5), 1e-9);
}

TEST(Divergence, DimensionMismatchThrows) {
  const SoftLabel p = make_soft_label(0, Agreement::kLow, 3);
  EXPECT_THROW(kl_standard(p, PredictionDistribution{{0.5, 0.5}}), Error);
}

TEST(Divergence, NamesRoundTrip) {
  for (auto d : {Divergence::kKlStandard, Divergence::kKlInverse, Divergence::kCe, Divergence::kBce})
    EXPECT_EQ(divergence_from_string(to_string(d)), d);
  EXPECT_THROW(divergence_from_string("JS"), Error);
}

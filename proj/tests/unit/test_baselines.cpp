#include "cseq/baselines.hpp"

#include <gtest/gtest.h>

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "cseq/confset.hpp"
#include "oracles.hpp"

namespace cseq {
namespace {

CoordinateWealths wealths(std::vector<double> linear) {
  for (double& x : linear) x = std::log(x);
  return CoordinateWealths(std::move(linear));
}

TEST(Bonferroni, Examples) {
  EXPECT_TRUE(bonferroni_membership(wealths({1, 1}), 0.05));
  EXPECT_FALSE(bonferroni_membership(wealths({50, 2}), 0.05));
  EXPECT_TRUE(bonferroni_membership(wealths({39, 39}), 0.05));
  EXPECT_FALSE(bonferroni_membership(wealths({40, 1}), 0.05));
}

TEST(Mixture, Examples) {
  EXPECT_TRUE(mixture_membership(wealths({30, 2}), 0.05));
  EXPECT_FALSE(mixture_membership(wealths({39, 39}), 0.05));
  EXPECT_FALSE(mixture_membership(wealths({20, 20}), 0.05));
  for (double delta : {0.01, 0.5, 0.99}) EXPECT_TRUE(mixture_membership(wealths({1, 1, 1}), delta));
}

// Bonferroni keeps strictly more here than the mixture does.
TEST(Mixture, StrictWitness) {
  const auto w = wealths({39, 39});
  EXPECT_TRUE(bonferroni_membership(w, 0.05));
  EXPECT_FALSE(mixture_membership(w, 0.05));
}

TEST(CoordinateWealths, Kt2MatchesBinaryKt) {
  const std::vector<double> counts = {3, 1, 2};
  const ProbVector m({0.2, 0.5, 0.3});
  const auto w = CoordinateWealths::kt2(counts, m);
  for (std::size_t j = 0; j < 3; ++j) {
    const std::vector<double> binary = {counts[j], 6 - counts[j]};
    EXPECT_EQ(w.log_wealths()[j], kt_log_wealth(binary, ProbVector({m[j], 1 - m[j]}), DirichletPrior::jeffreys(2)).value());
  }
  EXPECT_THROW(CoordinateWealths(std::vector<double>{0.0}), std::invalid_argument);
}

// Every candidate in the mixture set is in the Bonferroni set, at every step.
TEST(Mixture, ContainedInBonferroni) {
  std::mt19937_64 rng(88);
  const auto grid = simplex_lattice(3, 30);
  std::size_t strict = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto mu = oracle::random_simplex(3, rng);
    std::discrete_distribution<std::size_t> d(mu.begin(), mu.end());
    std::vector<double> counts(3, 0.0);
    for (int t = 0; t < 60; ++t) {
      counts[d(rng)] += 1;
      for (const auto& m : grid) {
        const auto w = CoordinateWealths::kt2(counts, m);
        const bool mix = mixture_membership(w, 0.05);
        const bool bonf = bonferroni_membership(w, 0.05);
        if (mix) EXPECT_TRUE(bonf);
        if (bonf && !mix) ++strict;
      }
    }
  }
  EXPECT_GT(strict, 0u);
}

TEST(Sanov, RadiusFormula) {
  EXPECT_NEAR(sanov_radius(10, 3, 0.05), std::log(20.0) / 10 + 0.3 * std::log(11.0), 1e-15);
  EXPECT_NEAR(sanov_radius(10, 3, 0.05), 1.0189418092, 1e-9);
  EXPECT_LT(sanov_radius(10000, 3, 0.05), sanov_radius(100, 3, 0.05));
  EXPECT_THROW(sanov_radius(0, 3, 0.05), std::invalid_argument);
  const ProbVector mu_hat({0.2, 0.3, 0.5});
  EXPECT_TRUE(sanov_membership(mu_hat, mu_hat, 10, 3, 0.05));
}

TEST(Mardia, RadiusAndGate) {
  EXPECT_EQ(mardia_min_samples(3), 34);
  EXPECT_NEAR(8 * std::acos(-1.0) * std::pow(3 / std::exp(1.0), 3), 33.79, 0.01);
  EXPECT_FALSE(mardia_radius(33, 3, 0.05).has_value());
  EXPECT_TRUE(mardia_radius(34, 3, 0.05).has_value());
  EXPECT_FALSE(mardia_radius(10, 3, 0.05).has_value());
  EXPECT_NEAR(*mardia_radius(100, 3, 0.05), 0.02 * std::log(80.0), 1e-15);
  EXPECT_NEAR(*mardia_radius(100, 3, 0.05), 0.0876405327, 1e-9);
  const ProbVector mu_hat({0.2, 0.3, 0.5});
  EXPECT_FALSE(mardia_membership(mu_hat, mu_hat, 10, 3, 0.05).has_value());
  EXPECT_TRUE(*mardia_membership(mu_hat, mu_hat, 100, 3, 0.05));
}

TEST(Sanov, LooserThanKt) {
  for (std::int64_t t : {30, 100, 300}) {
    const std::vector<double> counts(3, static_cast<double>(t) / 3);
    EXPECT_LT(kt_kl_threshold(counts, 0.05, DirichletPrior::jeffreys(3)), sanov_radius(t, 3, 0.05)) << t;
  }
}

TEST(ClopperPearson, Examples) {
  EXPECT_EQ(clopper_pearson_interval(0, 5, 0.1).lower, 0.0);
  EXPECT_EQ(clopper_pearson_interval(5, 5, 0.1).upper, 1.0);
  const auto iv = clopper_pearson_interval(1, 2, 0.1);
  EXPECT_NEAR(iv.lower, 1 - std::sqrt(0.95), 1e-9);
  EXPECT_NEAR(iv.upper, std::sqrt(0.95), 1e-9);
  EXPECT_THROW(clopper_pearson_interval(3, 2, 0.1), std::invalid_argument);
  EXPECT_THROW(clopper_pearson_interval(-1, 2, 0.1), std::invalid_argument);
}

TEST(ClopperPearson, MatchesInverseBeta) {
  for (std::int64_t n = 1; n <= 40; n += 3) {
    for (std::int64_t k = 0; k <= n; ++k) {
      for (double dp : {0.01, 0.05, 0.2}) {
        const auto iv = clopper_pearson_interval(k, n, dp);
        const double lo = k == 0 ? 0.0 : boost::math::ibeta_inv(double(k), double(n - k + 1), dp / 2);
        const double hi = k == n ? 1.0 : boost::math::ibeta_inv(double(k + 1), double(n - k), 1 - dp / 2);
        EXPECT_NEAR(iv.lower, lo, 1e-9) << k << "/" << n;
        EXPECT_NEAR(iv.upper, hi, 1e-9) << k << "/" << n;
      }
    }
  }
}

TEST(ClopperPearson, BonferroniBox) {
  const auto box = cp_bonferroni_box(CountVector({5, 3, 2}), 0.15);
  ASSERT_EQ(box.size(), 3u);
  const auto single = clopper_pearson_interval(5, 10, 0.05);
  EXPECT_EQ(box[0].lower, single.lower);
  EXPECT_EQ(box[0].upper, single.upper);
  EXPECT_TRUE(in_box(box, ProbVector({0.5, 0.3, 0.2})));
  EXPECT_FALSE(in_box(box, ProbVector({0.01, 0.01, 0.98})));
}

}  // namespace
}  // namespace cseq

#include "cseq/reduce.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cseq/confset.hpp"

namespace cseq {
namespace {

TEST(Embed, Examples) {
  const auto a = embed(BoxObservation({0.3, 0.9}));
  EXPECT_NEAR(a[0], 0.15, 1e-15);
  EXPECT_NEAR(a[1], 0.45, 1e-15);
  EXPECT_NEAR(a[2], 0.4, 1e-15);
  EXPECT_EQ(embed(BoxObservation({0.0, 0.0, 0.0})), ProbVector::vertex(4, 3));
  const auto ones = embed(BoxObservation({1.0, 1.0, 1.0}));
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(ones[j], 1.0 / 3, 1e-15);
  EXPECT_EQ(ones[3], 0.0);
  EXPECT_EQ(embed(BoxObservation({0.7})), ProbVector({0.7, 1.0 - 0.7}));
}

TEST(Embed, RejectsOutOfBox) {
  EXPECT_THROW(BoxObservation({1.2}), std::invalid_argument);
  EXPECT_THROW(BoxObservation({-0.01, 0.5}), std::invalid_argument);
  EXPECT_THROW(BoxObservation(std::vector<double>{}), std::invalid_argument);
  EXPECT_EQ(BoxObservation({1.0 + 1e-12})[0], 1.0);
}

TEST(Embed, RoundTripAndMeanCommutes) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t d = 1; d <= 4; ++d) {
    std::vector<double> mean(d, 0.0);
    std::vector<ProbVector> embedded;
    const int n = 50;
    for (int i = 0; i < n; ++i) {
      std::vector<double> y(d);
      for (auto& x : y) x = u(rng);
      for (std::size_t j = 0; j < d; ++j) mean[j] += y[j] / n;
      const BoxObservation b(y);
      embedded.push_back(embed(b));
      const auto back = project(embedded.back());
      for (std::size_t j = 0; j < d; ++j) EXPECT_NEAR(back[j], y[j], 1e-12);
    }
    const auto lhs = embed(BoxObservation(mean));
    const auto rhs = empirical_mean(embedded);
    for (std::size_t j = 0; j <= d; ++j) EXPECT_NEAR(lhs[j], rhs[j], 1e-12);
  }
}

TEST(BoxGrid, ShapeAndFirstPoint) {
  const auto g = embedded_box_grid(2, 4);
  EXPECT_EQ(g.size(), 25u);
  EXPECT_EQ(g.front(), ProbVector::vertex(3, 2));
  EXPECT_THROW(embedded_box_grid(0, 4), std::invalid_argument);
}

std::vector<BoxObservation> box_stream(const std::vector<double>& mean, int horizon, std::mt19937_64& rng) {
  // Each coordinate is Bernoulli-smoothed: a Beta(4m, 4(1−m)) draw.
  std::vector<BoxObservation> out;
  for (int t = 0; t < horizon; ++t) {
    std::vector<double> y(mean.size());
    for (std::size_t j = 0; j < mean.size(); ++j) {
      std::gamma_distribution<double> ga(4 * mean[j], 1.0);
      std::gamma_distribution<double> gb(4 * (1 - mean[j]), 1.0);
      const double a = ga(rng);
      const double b = gb(rng);
      y[j] = a / (a + b);
    }
    out.emplace_back(y);
  }
  return out;
}

TEST(BoxMembership, FreshSetKeepsEveryCandidate) {
  const auto grid = make_candidate_grid(embedded_box_grid(2, 5));
  const ConfidenceSet set(grid, 0.05);
  for (int a = 0; a <= 5; ++a) {
    for (int b = 0; b <= 5; ++b) EXPECT_TRUE(box_membership(BoxObservation({a / 5.0, b / 5.0}), set));
  }
}

// The scalar box is the two-outcome game on [0,1].
TEST(BoxMembership, ScalarCaseIsBinary) {
  std::mt19937_64 rng(2);
  const auto obs = box_stream({0.3}, 30, rng);
  const DirichletPrior prior = DirichletPrior::jeffreys(2);
  UpState s(2, prior);
  for (const auto& y : obs) s.absorb(ProbVector({y[0], 1 - y[0]}));
  for (int i = 0; i <= 20; ++i) {
    const double m = i / 20.0;
    EXPECT_EQ(box_membership(BoxObservation({m}), [&](const ProbVector& p) { return up_log_wealth(s, p); }, 0.05),
              membership(up_log_wealth(s, ProbVector({m, 1 - m})), 0.05));
  }
}

TEST(BoxMembership, GridAgreesWithDirectEvaluation) {
  std::mt19937_64 rng(9);
  const auto obs = box_stream({0.4, 0.7}, 25, rng);
  UpState s(3, DirichletPrior::jeffreys(3));
  for (const auto& y : obs) s.absorb(embed(y));
  const UpWealthEvaluator eval(s);
  const auto grid = make_candidate_grid(embedded_box_grid(2, 10));
  const auto set = realize_on_grid(eval, grid, 0.05);
  for (int a = 0; a <= 10; ++a) {
    for (int b = 0; b <= 10; ++b) {
      const BoxObservation m({a / 10.0, b / 10.0});
      const double direct = up_log_wealth(s, embed(m)).value();
      const double via = eval(embed(m)).value();
      if (std::isfinite(direct)) {
        EXPECT_NEAR(via, direct, 1e-12 * std::max(1.0, std::abs(direct)));
      } else {
        EXPECT_EQ(via, direct);
      }
      EXPECT_EQ(box_membership(m, set), membership(LogValue(via), 0.05));
    }
  }
}

// Box-level coverage of μ and simplex-level coverage of embed(μ) are the
// same indicator sequence.
TEST(BoxMembership, CoverageTransfers) {
  std::mt19937_64 rng(44);
  const std::vector<double> mu = {0.5, 0.25};
  const BoxObservation mu_box(mu);
  const auto grid = make_candidate_grid(embedded_box_grid(2, 8));
  for (int trial = 0; trial < 20; ++trial) {
    const auto obs = box_stream(mu, 40, rng);
    UpState s(3, DirichletPrior::jeffreys(3));
    ConfidenceSet set(grid, 0.05);
    double box_running = 0.0;
    std::vector<bool> simplex_flags;
    std::vector<bool> box_flags;
    for (const auto& y : obs) {
      s.absorb(embed(y));
      const UpWealthEvaluator eval(s);
      set.update(eval);
      simplex_flags.push_back(set.contains(embed(mu_box)));
      box_running = std::max(box_running, eval(embed(mu_box)).value());
      box_flags.push_back(box_running < log_inverse_delta(0.05));
      EXPECT_EQ(box_membership(mu_box, set), simplex_flags.back());
    }
    EXPECT_EQ(simplex_flags, box_flags);
  }
}

}  // namespace
}  // namespace cseq

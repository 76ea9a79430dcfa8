#include "cseq/confset.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "oracles.hpp"

namespace cseq {
namespace {

const DirichletPrior kHalf2 = DirichletPrior::jeffreys(2);
const DirichletPrior kHalf3 = DirichletPrior::jeffreys(3);

CandidateGrid binary_grid(std::int64_t g) { return make_candidate_grid(simplex_lattice(2, g)); }

TEST(Membership, Examples) {
  EXPECT_TRUE(membership(LogValue(0.0), 0.05));
  const auto w = kt_log_wealth(CountVector({1, 0}), ProbVector({0.02, 0.98}), kHalf2);
  EXPECT_NEAR(w.wealth(), 25.0, 1e-10);
  EXPECT_FALSE(membership(w, 0.05));
  EXPECT_FALSE(membership(LogValue(std::log(20.0)), 0.05));
  EXPECT_FALSE(membership(LogValue::infinite(), 0.05));
  EXPECT_TRUE(membership(LogValue::zero_wealth(), 0.05));
  EXPECT_THROW(membership(LogValue(0.0), 0.0), std::domain_error);
  EXPECT_THROW(membership(LogValue(0.0), 1.5), std::domain_error);
}

TEST(KlThreshold, TwoDrawExample) {
  const std::vector<double> counts = {2, 0};
  const double th = kt_kl_threshold(counts, 0.05, kHalf2);
  EXPECT_NEAR(th, 0.5 * (std::log(20.0) + std::log(1 / 0.375)), 1e-12);
  EXPECT_NEAR(th, 1.9882807633, 1e-9);
  // D(e_1 ‖ m) = −ln m_1, so the boundary is m_1 = e^{−threshold}.
  EXPECT_NEAR(std::exp(-th), 0.13693063937629153, 1e-12);
  const double ln_q = q_kt(counts, kHalf2).value();
  EXPECT_NEAR(kt_kl_threshold(counts, 1 - 1e-15, kHalf2), -ln_q / 2, 1e-12);
  EXPECT_THROW(kt_kl_threshold(std::vector<double>{0, 0}, 0.05, kHalf2), std::invalid_argument);
}

TEST(KlThreshold, AgreesWithWealthTest) {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> u(0.001, 0.5);
  int agreements = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const std::size_t k = 2 + rep % 3;
    const DirichletPrior prior = DirichletPrior::jeffreys(k);
    std::vector<double> counts(k);
    for (auto& c : counts) c = static_cast<double>(rng() % 8);
    counts[rng() % k] += 1;
    const ProbVector m(oracle::random_simplex(k, rng));
    const double delta = u(rng);
    const auto w = kt_log_wealth(counts, m, prior);
    // Both forms are the same inequality; the gap below is pure rounding.
    double t = 0.0;
    for (double c : counts) t += c;
    std::vector<double> mu_hat(counts);
    for (auto& x : mu_hat) x /= t;
    const double lhs = t * (kl_divergence(mu_hat, m.coords()) - kt_kl_threshold(counts, delta, prior));
    EXPECT_NEAR(lhs, w.value() - log_inverse_delta(delta), 1e-12 * std::max(1.0, std::abs(w.value())));
    if (std::abs(w.value() - log_inverse_delta(delta)) > 1e-9) {
      EXPECT_EQ(kt_kl_membership(counts, m, delta, prior), membership(w, delta));
      ++agreements;
    }
  }
  EXPECT_GT(agreements, 990);
}

TEST(Thm3bBound, Examples) {
  const auto b = thm3b_lower_bound(CountVector({2, 0}), 0.05, kHalf2);
  EXPECT_NEAR(b[0], std::sqrt(0.01875), 1e-12);
  EXPECT_EQ(b[1], 0.0);
  EXPECT_NEAR(thm3b_lower_bound(CountVector({1, 0}), 0.05, kHalf2)[0], 0.025, 1e-12);
  EXPECT_THROW(thm3b_lower_bound(CountVector({0, 0}), 0.05, kHalf2), std::invalid_argument);
}

// (k_j/t)(δq)^{1/t} would cut off this member; the per-coordinate bound does not.
TEST(Thm3bBound, ScaledFormIsNotAnOuterBound) {
  const CountVector c({0, 1, 1});
  const ProbVector m({0.0, 0.025, 0.975});
  EXPECT_TRUE(membership(kt_log_wealth(c, m, kHalf3), 0.05));
  const double scaled = 0.5 * std::exp((std::log(0.05) + q_kt(c, kHalf3).value()) / 2);
  EXPECT_NEAR(scaled, 0.0288675134594813, 1e-12);
  EXPECT_LT(m[1], scaled);
  const auto b = thm3b_lower_bound(c, 0.05, kHalf3);
  EXPECT_NEAR(b[1], 0.05 / 15, 1e-15);
  EXPECT_GT(m[1], b[1]);
  EXPECT_EQ(b[0], 0.0);
}

TEST(Thm3bBound, NeverExcludesAMember) {
  const auto grid = simplex_lattice(3, 40);
  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 100; ++rep) {
    CountVector c = CountVector::zeros(3);
    const std::size_t t = 1 + rng() % 40;
    const auto mu = oracle::random_simplex(3, rng);
    std::discrete_distribution<std::size_t> d(mu.begin(), mu.end());
    for (std::size_t i = 0; i < t; ++i) c.increment(d(rng));
    const auto bound = thm3b_lower_bound(c, 0.05, kHalf3);
    for (const auto& m : grid) {
      if (!membership(kt_log_wealth(c, m, kHalf3), 0.05)) continue;
      for (std::size_t j = 0; j < 3; ++j) {
        if (c[j] > 0) {
          EXPECT_GT(m[j], bound[j]);
        } else {
          EXPECT_GE(m[j], bound[j]);
        }
      }
    }
  }
}

TEST(Thm3cThreshold, Examples) {
  EXPECT_NEAR(thm3c_asymptotic_threshold(100, 3, 0.05), 0.0760090, 1e-6);
  const double base = std::log(20.0) / 100;
  EXPECT_NEAR(thm3c_asymptotic_threshold(100, 2, 0.05) - base, 0.5 * (thm3c_asymptotic_threshold(100, 3, 0.05) - base),
              1e-15);
  EXPECT_THROW(thm3c_asymptotic_threshold(1, 3, 0.05), std::invalid_argument);
}

TEST(Thm3cThreshold, GapShrinks) {
  auto gap = [](double t) {
    const std::vector<double> counts(3, t / 3);
    return std::abs(kt_kl_threshold(counts, 0.05, kHalf3) -
                    thm3c_asymptotic_threshold(static_cast<std::int64_t>(t), 3, 0.05));
  };
  EXPECT_LT(gap(1e4), gap(1e3));
  EXPECT_LT(gap(1e5), gap(1e4));
}

TEST(GridSet, FreshSetIsFull) {
  ConfidenceSet set(binary_grid(4), 0.05);
  EXPECT_EQ(set.active_count(), 5u);
  EXPECT_EQ(relative_volume(set), 1.0);
}

TEST(GridSet, OneDrawExcludesOnlyZero) {
  const CountVector c({1, 0});
  const auto set = realize_on_grid([&](const ProbVector& m) { return kt_log_wealth(c, m, kHalf2); }, binary_grid(4), 0.05);
  EXPECT_FALSE(set.contains(ProbVector({0.0, 1.0})));
  for (double m1 : {0.25, 0.5, 0.75, 1.0}) EXPECT_TRUE(set.contains(ProbVector({m1, 1 - m1}))) << m1;
  EXPECT_THROW(set.contains(ProbVector({0.1, 0.9})), std::invalid_argument);
}

TEST(GridSet, TwoDrawVolume) {
  const CountVector c({2, 0});
  const auto set = realize_on_grid([&](const ProbVector& m) { return kt_log_wealth(c, m, kHalf2); }, binary_grid(4), 0.05);
  EXPECT_NEAR(relative_volume(set), 0.8, 1e-15);
}

TEST(GridSet, SingletonVolume) {
  ConfidenceSet set(binary_grid(4), 0.05);
  set.update_indexed([](std::size_t i) { return i == 2 ? LogValue(0.0) : LogValue::infinite(); });
  EXPECT_EQ(set.active_count(), 1u);
  EXPECT_NEAR(relative_volume(set), 0.2, 1e-15);
}

TEST(GridSet, ExcludedCandidatesStayExcludedAndUnevaluated) {
  ConfidenceSet set(binary_grid(10), 0.05);
  set.update_indexed([](std::size_t i) { return i < 3 ? LogValue::infinite() : LogValue(0.0); });
  std::vector<std::size_t> seen;
  set.update_indexed([&](std::size_t i) {
    seen.push_back(i);
    return LogValue(-5.0);
  });
  EXPECT_EQ(seen.size(), 8u);
  EXPECT_EQ(seen.front(), 3u);
  EXPECT_FALSE(set.is_active(0));
  // The running maximum keeps the earlier, larger value.
  EXPECT_EQ(set.running_max(5).value(), 0.0);
}

TEST(GridSet, ActiveCountNonIncreasing) {
  std::mt19937_64 rng(10);
  const auto grid = make_candidate_grid(simplex_lattice(3, 30));
  ConfidenceSet set(grid, 0.05);
  CountVector c = CountVector::zeros(3);
  std::discrete_distribution<std::size_t> d({0.6, 0.3, 0.1});
  std::size_t last = set.active_count();
  for (int t = 0; t < 100; ++t) {
    c.increment(d(rng));
    set.update([&](const ProbVector& m) { return kt_log_wealth(c, m, kHalf3); });
    EXPECT_LE(set.active_count(), last);
    last = set.active_count();
  }
}

// Any grid midpoint of two active candidates is active (the set is convex).
TEST(GridSet, MidpointsOfMembersAreMembers) {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 50; ++rep) {
    const std::int64_t g = 20 + 2 * static_cast<std::int64_t>(rng() % 21);
    const auto grid = make_candidate_grid(simplex_lattice(3, g));
    const GridIndex index(3, g);
    ConfidenceSet set(grid, 0.05);
    const auto mu = oracle::random_simplex(3, rng);
    const bool soft = rep % 2 == 1;
    UpState up(3, kHalf3);
    std::vector<double> sums(3, 0.0);
    const std::size_t steps = 5 + rng() % 40;
    std::discrete_distribution<std::size_t> d(mu.begin(), mu.end());
    for (std::size_t t = 0; t < steps; ++t) {
      if (soft) {
        const ProbVector y(oracle::random_simplex(3, rng));
        up.absorb(y);
        const UpWealthEvaluator eval(up);
        set.update(eval);
      } else {
        sums[d(rng)] += 1;
        set.update([&](const ProbVector& m) { return kt_log_wealth(sums, m, kHalf3); });
      }
    }
    const auto lattice = enumerate_grid(3, g);
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (set.is_active(i)) active.push_back(i);
    }
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const auto& x = lattice[active[a]];
        const auto& y = lattice[active[b]];
        std::vector<std::int64_t> mid(3);
        bool even = true;
        for (std::size_t j = 0; j < 3; ++j) {
          even = even && (x[j] + y[j]) % 2 == 0;
          mid[j] = (x[j] + y[j]) / 2;
        }
        if (!even) continue;
        EXPECT_TRUE(set.is_active(index.rank(CountVector(mid))));
      }
    }
  }
}

// The candidate nearest the empirical mean is never excluded.
TEST(GridSet, NearestToEmpiricalMeanStaysActive) {
  std::mt19937_64 rng(47);
  const std::int64_t g = 100;
  const auto grid = make_candidate_grid(simplex_lattice(3, g));
  for (int rep = 0; rep < 20; ++rep) {
    const auto mu = oracle::random_simplex(3, rng);
    std::discrete_distribution<std::size_t> d(mu.begin(), mu.end());
    ConfidenceSet set(grid, 0.05);
    std::vector<double> sums(3, 0.0);
    for (int t = 1; t <= 100; ++t) {
      sums[d(rng)] += 1;
      set.update([&](const ProbVector& m) { return kt_log_wealth(sums, m, kHalf3); });
      std::vector<double> mu_hat(sums);
      for (auto& x : mu_hat) x /= t;
      EXPECT_LE(kt_log_wealth(sums, ProbVector(mu_hat), kHalf3).value(), 1e-12);
      std::size_t best = 0;
      double best_d = kInf;
      for (std::size_t i = 0; i < set.size(); ++i) {
        double dist = 0.0;
        for (std::size_t j = 0; j < 3; ++j) dist += std::pow(set.candidates()[i][j] - mu_hat[j], 2);
        if (dist < best_d) {
          best_d = dist;
          best = i;
        }
      }
      EXPECT_TRUE(set.is_active(best)) << "rep=" << rep << " t=" << t;
    }
  }
}

TEST(GridSet, CsvDump) {
  const CountVector c({1, 0});
  const auto set = realize_on_grid([&](const ProbVector& m) { return kt_log_wealth(c, m, kHalf2); }, binary_grid(2), 0.05);
  std::ostringstream os;
  set.write_csv(os);
  const std::string csv = os.str();
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(csv.find("inf"), std::string::npos);
}

TEST(RefineBoundary, PointsSitOnTheBoundary) {
  const std::vector<double> counts = {6, 3, 1};
  auto kernel = [&](const ProbVector& m) { return kt_log_wealth(counts, m, kHalf3); };
  const auto pts = refine_boundary(kernel, ProbVector({0.6, 0.3, 0.1}), 0.05, 24, 40);
  ASSERT_EQ(pts.size(), 24u);
  const double th = std::log(20.0);
  for (const auto& p : pts) {
    const double w = kernel(p).value();
    EXPECT_LT(w, th);
    // Any boundary point not on a face must be within bisection error of the threshold.
    if (p[0] > 1e-9 && p[1] > 1e-9 && p[2] > 1e-9) EXPECT_NEAR(w, th, 1e-6);
  }
  EXPECT_THROW(refine_boundary(kernel, ProbVector({0.01, 0.01, 0.98}), 0.05, 4), std::invalid_argument);
}

TEST(DefaultResolution, ByDimension) {
  EXPECT_EQ(default_grid_resolution(2), 100);
  EXPECT_EQ(default_grid_resolution(3), 100);
  EXPECT_EQ(default_grid_resolution(4), 40);
  EXPECT_EQ(default_grid_resolution(5), 20);
}

}  // namespace
}  // namespace cseq

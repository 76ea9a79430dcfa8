#include "cseq/simplex.hpp"

#include <gtest/gtest.h>

#include <set>
#include <vector>

namespace cseq {
namespace {

// Counts the lattice by brute force over {0..t}^K.
std::uint64_t brute_grid_size(std::size_t k, std::int64_t t) {
  std::uint64_t n = 0;
  std::vector<std::int64_t> v(k, 0);
  while (true) {
    std::int64_t s = 0;
    for (auto x : v) s += x;
    if (s == t) ++n;
    std::size_t i = 0;
    while (i < k && v[i] == t) v[i++] = 0;
    if (i == k) break;
    ++v[i];
  }
  return n;
}

TEST(Grid, SizeMatchesBruteForce) {
  for (std::size_t k = 1; k <= 5; ++k) {
    for (std::int64_t t = 0; t <= 12; ++t) {
      const auto grid = enumerate_grid(k, t);
      EXPECT_EQ(grid.size(), brute_grid_size(k, t)) << "K=" << k << " t=" << t;
      EXPECT_EQ(grid_size(k, t), grid.size());
      std::set<std::vector<std::int64_t>> seen;
      for (const auto& c : grid) {
        EXPECT_EQ(c.total(), t);
        seen.emplace(c.counts().begin(), c.counts().end());
      }
      EXPECT_EQ(seen.size(), grid.size());
    }
  }
}

TEST(Grid, SmallListings) {
  const auto g0 = enumerate_grid(2, 0);
  ASSERT_EQ(g0.size(), 1u);
  EXPECT_EQ(g0[0], CountVector::zeros(2));

  const auto g1 = enumerate_grid(3, 1);
  ASSERT_EQ(g1.size(), 3u);
  std::set<std::vector<std::int64_t>> ones;
  for (const auto& c : g1) ones.emplace(c.counts().begin(), c.counts().end());
  EXPECT_EQ(ones, (std::set<std::vector<std::int64_t>>{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));

  // Colex on partial sums (s1, s2): s2 is the slow index.
  const auto g2 = enumerate_grid(3, 2);
  const std::vector<CountVector> expected = {
      CountVector({0, 0, 2}), CountVector({0, 1, 1}), CountVector({1, 0, 1}),
      CountVector({0, 2, 0}), CountVector({1, 1, 0}), CountVector({2, 0, 0}),
  };
  EXPECT_EQ(g2, expected);
}

TEST(Grid, RankUnrankBijection) {
  for (std::size_t k = 1; k <= 5; ++k) {
    for (std::int64_t t = 0; t <= 8; ++t) {
      const GridIndex index(k, t);
      const auto grid = enumerate_grid(k, t);
      ASSERT_EQ(index.size(), grid.size());
      for (std::uint64_t i = 0; i < index.size(); ++i) {
        EXPECT_EQ(index.unrank(i), grid[i]);
        EXPECT_EQ(index.rank(grid[i]), i);
      }
    }
  }
  EXPECT_EQ(GridIndex(3, 1).unrank(0), enumerate_grid(3, 1).front());
  EXPECT_THROW(GridIndex(3, 4).unrank(15), std::out_of_range);
}

TEST(Grid, PrefixProperty) {
  // Lattice t-1 sits in the first |G_{K,t-1}| slots of lattice t once a unit
  // is added to the last coordinate.
  const auto small = enumerate_grid(4, 5);
  const GridIndex big(4, 6);
  for (std::size_t i = 0; i < small.size(); ++i) {
    std::vector<std::int64_t> c(small[i].counts().begin(), small[i].counts().end());
    ++c.back();
    EXPECT_EQ(big.rank(CountVector(c)), i);
  }
}

TEST(Grid, BinaryOrderIsMonotone) {
  const GridIndex index(2, 9);
  for (std::int64_t j = 1; j <= 9; ++j) {
    EXPECT_GT(index.rank(CountVector({j, 9 - j})), index.rank(CountVector({j - 1, 10 - j})));
  }
}

TEST(Grid, CapErrorNamesCap) {
  try {
    enumerate_grid(5, 200, 1000);
    FAIL() << "expected ResourceError";
  } catch (const ResourceError& e) {
    EXPECT_NE(std::string(e.what()).find("1000"), std::string::npos) << e.what();
  }
  EXPECT_THROW(GridIndex(6, 400, 1u << 20), ResourceError);
}

TEST(Grid, RankRejectsWrongTotal) {
  const GridIndex index(3, 4);
  EXPECT_ANY_THROW(index.rank(CountVector({1, 1, 1})));
  EXPECT_ANY_THROW(index.rank(CountVector({4, 0})));
}

TEST(ProbVector, Validation) {
  EXPECT_NO_THROW(ProbVector({0.5, 0.5}));
  EXPECT_NO_THROW(ProbVector({0.5, 0.5 + 5e-10}));
  EXPECT_THROW(ProbVector({0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(ProbVector({1.0}), std::invalid_argument);
  EXPECT_THROW(ProbVector({1.2, -0.2}), std::invalid_argument);
  // Stored as given, not renormalized.
  EXPECT_EQ(ProbVector({0.5, 0.5 + 5e-10})[1], 0.5 + 5e-10);
}

TEST(ProbVector, TextForms) {
  EXPECT_EQ(ProbVector::parse("0.25,0.75"), ProbVector({0.25, 0.75}));
  EXPECT_EQ(ProbVector::parse(ProbVector({0.1, 0.2, 0.7}).to_string()), ProbVector({0.1, 0.2, 0.7}));
  EXPECT_EQ(CountVector::parse("3,0,2"), CountVector({3, 0, 2}));
  EXPECT_EQ(CountVector::parse("3,0,2").total(), 5);
  EXPECT_THROW(CountVector::parse("3,x"), std::invalid_argument);
  EXPECT_THROW(CountVector({1, -1}), std::invalid_argument);
}

TEST(EmpiricalMean, Examples) {
  const std::vector<ProbVector> one = {ProbVector::vertex(2, 0)};
  EXPECT_EQ(empirical_mean(one), ProbVector::vertex(2, 0));
  const std::vector<ProbVector> two = {ProbVector::vertex(2, 0), ProbVector::vertex(2, 1)};
  EXPECT_EQ(empirical_mean(two), ProbVector({0.5, 0.5}));
  const std::vector<ProbVector> soft = {ProbVector({0.75, 0.25}), ProbVector({0.25, 0.75})};
  EXPECT_EQ(empirical_mean(soft), ProbVector({0.5, 0.5}));
  EXPECT_THROW(empirical_mean(std::vector<ProbVector>{}), std::invalid_argument);
  const std::vector<ProbVector> mixed = {ProbVector::uniform(2), ProbVector::uniform(3)};
  EXPECT_THROW(empirical_mean(mixed), std::invalid_argument);
}

TEST(SimplexLattice, PointsSumToOne) {
  const auto lattice = simplex_lattice(4, 10);
  EXPECT_EQ(lattice.size(), grid_size(4, 10));
  for (const auto& p : lattice) {
    double s = 0.0;
    for (double x : p.coords()) s += x;
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

}  // namespace
}  // namespace cseq

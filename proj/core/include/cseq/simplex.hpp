#pragma once

// Points of the probability simplex, integer count vectors, and the ordered
// lattice G_{K,t} = {k in Z^K_{>=0} : k_1 + ... + k_K = t}.
//
// Lattice order: a count vector k is identified with its partial sums
// s_j = k_1 + ... + k_j (j < K), and vectors are ordered colexicographically
// on (s_1, ..., s_{K-1}). The rank
//
//   rank(k) = sum_{j=1}^{K-1} C(s_j + j - 1, j)
//
// does not depend on t, so G_{K,t-1} occupies an index prefix of G_{K,t}
// (after dropping the last coordinate). Removing one unit from coordinate K
// keeps the index; removing one from coordinate j < K subtracts
// sum_{i=j}^{K-1} C(s_i + i - 2, i - 1).

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cseq {

/// Default limit on |G_{K,t}| for dense tables.
inline constexpr std::uint64_t kDefaultGridCap = std::uint64_t{1} << 27;

inline constexpr double kSimplexTolerance = 1e-9;

/// Raised when a dense lattice table would exceed its configured cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ProbVector {
 public:
  /// Validates K >= 2, nonnegative coordinates and |sum - 1| <= tolerance.
  /// Coordinates are stored exactly as given (no renormalization).
  explicit ProbVector(std::vector<double> coords, double tolerance = kSimplexTolerance);

  static ProbVector uniform(std::size_t k);
  static ProbVector vertex(std::size_t k, std::size_t j);
  static ProbVector parse(std::string_view text);

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t j) const { return coords_[j]; }
  std::span<const double> coords() const { return coords_; }
  const std::vector<double>& vec() const { return coords_; }

  std::string to_string() const;

  friend bool operator==(const ProbVector&, const ProbVector&) = default;

 private:
  std::vector<double> coords_;
};

class CountVector {
 public:
  CountVector() = default;
  explicit CountVector(std::vector<std::int64_t> counts);

  static CountVector zeros(std::size_t k) { return CountVector(std::vector<std::int64_t>(k, 0)); }
  static CountVector one_hot(std::size_t k, std::size_t j);
  static CountVector parse(std::string_view text);

  std::size_t dim() const { return counts_.size(); }
  std::int64_t total() const { return total_; }
  std::int64_t operator[](std::size_t j) const { return counts_[j]; }
  std::span<const std::int64_t> counts() const { return counts_; }

  void increment(std::size_t j);
  std::vector<double> as_reals() const;
  std::string to_string() const;

  friend bool operator==(const CountVector& a, const CountVector& b) {
    return a.counts_ == b.counts_;
  }

 private:
  std::vector<std::int64_t> counts_;
  std::int64_t total_ = 0;
};

/// Binomial coefficients C(n, r) for r < rows, saturating at UINT64_MAX.
class BinomialTable {
 public:
  BinomialTable(std::size_t max_n, std::size_t rows);
  std::uint64_t operator()(std::int64_t n, std::int64_t r) const;
  std::size_t max_n() const { return max_n_; }

 private:
  std::size_t max_n_;
  std::size_t rows_;
  std::vector<std::uint64_t> table_;
};

/// |G_{K,t}| = C(t+K-1, K-1), saturating at UINT64_MAX.
std::uint64_t grid_size(std::size_t k, std::int64_t t);

/// Throws ResourceError naming the cap if |G_{K,t}| exceeds it.
void check_grid_cap(std::size_t k, std::int64_t t, std::uint64_t cap);

/// Rank/unrank over one lattice G_{K,t}.
class GridIndex {
 public:
  GridIndex(std::size_t k, std::int64_t t, std::uint64_t cap = kDefaultGridCap);

  std::size_t dim() const { return k_; }
  std::int64_t t() const { return t_; }
  std::uint64_t size() const { return size_; }

  std::uint64_t rank(const CountVector& k) const;
  CountVector unrank(std::uint64_t index) const;

 private:
  std::size_t k_;
  std::int64_t t_;
  std::uint64_t size_;
  BinomialTable binom_;
};

/// All of G_{K,t} in lattice order.
std::vector<CountVector> enumerate_grid(std::size_t k, std::int64_t t,
                                        std::uint64_t cap = kDefaultGridCap);

/// The candidate lattice {k/G : k in G_{K,G}} in lattice order.
std::vector<ProbVector> simplex_lattice(std::size_t k, std::int64_t resolution,
                                        std::uint64_t cap = kDefaultGridCap);

ProbVector empirical_mean(std::span<const ProbVector> obs);

}  // namespace cseq

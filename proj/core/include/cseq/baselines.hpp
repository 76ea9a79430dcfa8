#pragma once

// Comparator constructions: coordinatewise aggregation of binary wealth
// processes (Bonferroni, mixture) and the fixed-time sets of Sanov, Mardia et
// al., and Clopper–Pearson with a Bonferroni correction.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cseq/numerics.hpp"
#include "cseq/simplex.hpp"
#include "cseq/wealth.hpp"

namespace cseq {

/// Per-coordinate binary KT log-wealths: coordinate j bets on the binary
/// sequence 1{z_i = j} with counts (k_j, t − k_j) against (m_j, 1 − m_j).
class CoordinateWealths {
 public:
  explicit CoordinateWealths(std::vector<double> log_wealths);

  /// Binary KT(2) reduction of (possibly fractional) counts at candidate m.
  static CoordinateWealths kt2(std::span<const double> counts, const ProbVector& m,
                               const DirichletPrior& binary_prior = DirichletPrior::jeffreys(2));

  std::size_t dim() const { return log_wealths_.size(); }
  std::span<const double> log_wealths() const { return log_wealths_; }

  /// max_j ln W_j − ln K; below ln(1/δ) iff every W_j < K/δ.
  double bonferroni_score() const;
  /// ln((1/K) Σ_j W_j).
  double mixture_score() const;

 private:
  std::vector<double> log_wealths_;
};

/// Binary KT log-wealth for x successes out of t against success rate p.
LogValue kt2_log_wealth(double successes, double trials, double p,
                        const DirichletPrior& binary_prior = DirichletPrior::jeffreys(2));

/// In iff every coordinate wealth is below K/δ.
bool bonferroni_membership(const CoordinateWealths& w, double delta);

/// In iff (1/K) Σ_j W_j < 1/δ (strict, matching the single-process rule).
bool mixture_membership(const CoordinateWealths& w, double delta);

/// (1/t) ln(1/δ) + (K/t) ln(t+1). Fixed-time, not time-uniform.
double sanov_radius(std::int64_t t, std::size_t k, double delta);
bool sanov_membership(const ProbVector& mu_hat, const ProbVector& m, std::int64_t t, std::size_t k,
                      double delta);

/// Smallest t for which the Mardia et al. bound applies: ceil(8π(K/e)^3).
std::int64_t mardia_min_samples(std::size_t k);

/// ((K−1)/t) ln(2(K−1)/δ), or nullopt while t < 8π(K/e)^3.
std::optional<double> mardia_radius(std::int64_t t, std::size_t k, double delta);

/// nullopt when the bound does not yet apply.
std::optional<bool> mardia_membership(const ProbVector& mu_hat, const ProbVector& m, std::int64_t t,
                                      std::size_t k, double delta);

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
};

/// Exact two-sided binomial interval at level 1 − δ', each tail δ'/2,
/// solved by bisection to 1e-10.
Interval clopper_pearson_interval(std::int64_t successes, std::int64_t trials, double delta_prime);

/// Product of per-coordinate Clopper–Pearson intervals at δ/K.
std::vector<Interval> cp_bonferroni_box(const CountVector& counts, double delta);

bool in_box(std::span<const Interval> box, const ProbVector& m);

}  // namespace cseq

#pragma once

// Gambling wealth kernels. Every kernel returns the log-wealth of a mixture
// bettor facing odds 1/m (or a without-replacement transform of it) for a
// candidate mean m.

#include <cstdint>
#include <span>
#include <vector>

#include "cseq/numerics.hpp"
#include "cseq/simplex.hpp"

namespace cseq {

/// Dirichlet mixing prior over constant bets. Defaults to (1/2, ..., 1/2).
class DirichletPrior {
 public:
  explicit DirichletPrior(std::vector<double> alpha);
  static DirichletPrior jeffreys(std::size_t k) { return DirichletPrior(std::vector<double>(k, 0.5)); }
  static DirichletPrior symmetric(std::size_t k, double a) { return DirichletPrior(std::vector<double>(k, a)); }

  std::size_t dim() const { return alpha_.size(); }
  double operator[](std::size_t j) const { return alpha_[j]; }
  std::span<const double> alpha() const { return alpha_; }
  double total() const { return total_; }
  /// ln B(alpha), cached.
  double log_beta() const { return log_beta_; }

 private:
  std::vector<double> alpha_;
  double total_ = 0.0;
  double log_beta_ = 0.0;
};

/// ln q^KT(x) = ln B(x + alpha) − ln B(alpha).
LogValue q_kt(std::span<const double> x, const DirichletPrior& prior);
LogValue q_kt(const CountVector& x, const DirichletPrior& prior);

/// KT mixture wealth m^{-k} B(k+alpha)/B(alpha). Counts may be fractional
/// (sums of probability-vector observations).
LogValue kt_log_wealth(std::span<const double> counts, const ProbVector& m, const DirichletPrior& prior);
LogValue kt_log_wealth(const CountVector& counts, const ProbVector& m, const DirichletPrior& prior);

/// Σ_i ln(Σ_j b_j y_ij / m_j).
LogValue constant_bettor_log_wealth(std::span<const ProbVector> obs, const ProbVector& b,
                                    const ProbVector& m);

/// State of the universal-portfolio dynamic program: for every k in G_{K,t},
/// table[rank(k)] = ln y^t[k], the total weight of observation paths whose
/// one-hot selections sum to k.
class UpState {
 public:
  UpState(std::size_t k, DirichletPrior prior, std::uint64_t cap = kDefaultGridCap);

  std::size_t dim() const { return k_; }
  std::int64_t t() const { return t_; }
  const DirichletPrior& prior() const { return prior_; }
  std::uint64_t cap() const { return cap_; }
  std::span<const double> table() const { return table_; }

  /// True iff some observation so far had a positive j-th coordinate, i.e.
  /// some table entry with k_j >= 1 carries mass.
  bool reaches(std::size_t j) const { return reaches_[j]; }

  /// In-place update with one observation; the caller must own the state.
  void absorb(const ProbVector& y);

 private:
  std::size_t k_;
  std::int64_t t_ = 0;
  DirichletPrior prior_;
  std::uint64_t cap_;
  std::vector<double> table_;
  std::vector<double> scratch_;
  std::vector<char> reaches_;
};

/// Value-semantics update: returns the state after absorbing y.
UpState up_absorb(const UpState& state, const ProbVector& y);

/// Cover's universal-portfolio wealth W(y^t; 1/m) = Σ_k y^t[k] m^{-k} B(k+alpha)/B(alpha).
LogValue up_log_wealth(const UpState& state, const ProbVector& m);

/// Per-step precomputation for evaluating the UP wealth at many candidates.
/// Holds c[k] = ln y^t[k] + ln q^KT(k) so each candidate costs one pass over
/// the lattice with no transcendental calls in the common case.
class UpWealthEvaluator {
 public:
  explicit UpWealthEvaluator(const UpState& state);

  LogValue operator()(const ProbVector& m) const;

  /// Reference path: direct two-pass log-sum-exp over every lattice term.
  LogValue evaluate_log_domain(const ProbVector& m) const;

 private:
  bool infinite_at(const ProbVector& m) const;
  bool evaluate_scaled(const ProbVector& m, double& out) const;

  std::size_t k_;
  std::int64_t t_;
  std::vector<double> coeff_;      // c[k], log scale
  std::vector<double> lin_coeff_;  // exp(c[k] - coeff_max_)
  double coeff_max_ = -kInf;
  std::vector<std::int64_t> argmax_counts_;
  std::vector<char> reaches_;
};

/// (N m − drawn)/(N − t); coordinates may be negative for infeasible m.
std::vector<double> wor_mean_transform(const ProbVector& m, const CountVector& drawn, std::int64_t population);

/// KT wealth with the final-time without-replacement plug-in:
/// B(K_t+alpha)/B(alpha) · ((N m − K_t)/(N − t))^{−K_t}.
LogValue wor_kt_log_wealth(const CountVector& drawn, const ProbVector& m, std::int64_t population,
                           const DirichletPrior& prior);

/// KT mixture facing round-by-round odds 1/m^WoR_{N,i}. Closed form
/// q^KT(K_t) + ln[(N)_t / Π_j (N m_j)_{K_tj}] with falling factorials.
/// Requires one-hot draws and integral N·m.
LogValue perround_wor_log_wealth(std::span<const ProbVector> draws, const ProbVector& m,
                                 std::int64_t population, const DirichletPrior& prior);

/// Posterior-prior ratio q^KT(K_t) · multinom(N; n) / multinom(N − t; n − K_t).
LogValue ppr_log_wealth(const CountVector& drawn, const CountVector& census, const DirichletPrior& prior);

/// Converts N·m to an integer census, or throws if it is not integral within 1e-9.
CountVector census_from_mean(const ProbVector& m, std::int64_t population);

}  // namespace cseq

#pragma once

// Sampling without replacement from a finite population of N categorical
// items. Hypotheses are integer censuses n in G_{K,N}; each census keeps a
// running maximum of its wealth and is dropped permanently once excluded.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cseq/numerics.hpp"
#include "cseq/simplex.hpp"
#include "cseq/wealth.hpp"

namespace cseq {

enum class WorMethod {
  kWorKt,     // KT wealth with the final-time mean transform
  kPpr,       // posterior-prior ratio, closed form
  kPerRound,  // KT mixture against round-by-round transformed odds, updated sequentially
};

std::string_view to_string(WorMethod method);
WorMethod parse_wor_method(std::string_view name);

struct CountInterval {
  std::int64_t lower = 0;
  std::int64_t upper = 0;
};

/// True iff the intervals are pairwise disjoint, which fixes the full rank order.
bool intervals_disjoint(std::span<const CountInterval> intervals);

class EmptyConfidenceSetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AuditState {
 public:
  AuditState(std::int64_t population, std::size_t k, WorMethod method, double delta,
             DirichletPrior prior, std::uint64_t cap = kDefaultGridCap);
  AuditState(std::int64_t population, std::size_t k, WorMethod method, double delta)
      : AuditState(population, k, method, delta, DirichletPrior::jeffreys(k)) {}

  std::int64_t population() const { return population_; }
  std::size_t dim() const { return k_; }
  std::int64_t t() const { return drawn_.total(); }
  WorMethod method() const { return method_; }
  double delta() const { return delta_; }
  const CountVector& drawn() const { return drawn_; }

  std::size_t active_count() const { return running_max_.size(); }
  std::uint64_t total_censuses() const { return total_; }
  double relative_volume() const {
    return static_cast<double>(active_count()) / static_cast<double>(total_);
  }

  /// Records one draw (0-based category) and re-evaluates every active census.
  /// Throws once t would reach N: the guarantee covers t in [1, N−1].
  void absorb(std::size_t category);

  bool is_active(const CountVector& census) const;
  /// Running maximum log-wealth of an active census; nullopt once excluded.
  std::optional<LogValue> running_max(const CountVector& census) const;
  std::vector<CountVector> active_censuses() const;

  /// [min, max] of each census coordinate over the active set.
  std::vector<CountInterval> category_count_bounds() const;

  bool rank_decided() const;

 private:
  double census_log_wealth(const std::int32_t* census) const;
  void prune();

  std::int64_t population_;
  std::size_t k_;
  WorMethod method_;
  double delta_;
  double log_threshold_;
  DirichletPrior prior_;
  std::uint64_t total_;
  CountVector drawn_;
  LogFactorialTable log_fact_;
  std::vector<double> log_int_;
  std::vector<double> log_gamma_alpha_;  // ln Γ(v + alpha_j), laid out [j * (N+1) + v]

  // Active censuses, flattened K at a time, with their running maximum and,
  // for the per-round method, the current sequential log-wealth.
  std::vector<std::int32_t> censuses_;
  std::vector<double> running_max_;
  std::vector<double> current_;
};

/// First t at which the rank order is decided while replaying draws, or N
/// when it never is (sentinel). An empty active set counts as decided-never.
std::int64_t stopping_time(std::span<const std::size_t> draws, std::int64_t population, std::size_t k,
                           WorMethod method, double delta,
                           const DirichletPrior& prior);

}  // namespace cseq

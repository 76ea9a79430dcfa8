#pragma once

// Confidence sets from wealth processes: m is kept while its log-wealth stays
// strictly below ln(1/δ). Grid realizations keep a per-candidate running
// maximum, so the reported set at time t is the intersection of all earlier
// sets and an excluded candidate is never evaluated again.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "cseq/numerics.hpp"
#include "cseq/simplex.hpp"
#include "cseq/wealth.hpp"

namespace cseq {

/// True iff log_wealth < ln(1/δ).
bool membership(LogValue log_wealth, double delta);

/// KL radius of the KT set: (1/t) ln(1/δ) + (1/t) ln(e^{−t H(μ̂)} / q^KT(t μ̂)),
/// where t μ̂ = counts. Requires t >= 1.
double kt_kl_threshold(std::span<const double> counts, double delta, const DirichletPrior& prior);

/// KT membership through D(μ̂‖m) < kt_kl_threshold.
bool kt_kl_membership(std::span<const double> counts, const ProbVector& m, double delta,
                      const DirichletPrior& prior);

/// Coordinatewise outer bound: every member m has m_j > (δ q^KT(k))^{1/k_j},
/// and bound_j = 0 when k_j = 0. The often-quoted (k_j/t)(δ q^KT(k))^{1/t}
/// agrees when k_j = t but is not sound in general: counts (0,1,1), δ = 0.05
/// admit m = (0, 0.025, 0.975) while that form demands m_2 > 0.0289.
std::vector<double> thm3b_lower_bound(const CountVector& counts, double delta, const DirichletPrior& prior);

/// (1/t) ln(1/δ) + ((K−1)/(2t)) ln t. Requires t >= 2.
double thm3c_asymptotic_threshold(std::int64_t t, std::size_t k, double delta);

/// Default lattice resolution per dimension: 100 for K <= 3, 40 for K = 4, 20 otherwise.
std::int64_t default_grid_resolution(std::size_t k);

using CandidateGrid = std::shared_ptr<const std::vector<ProbVector>>;

CandidateGrid make_candidate_grid(std::vector<ProbVector> candidates);

class ConfidenceSet {
 public:
  ConfidenceSet(CandidateGrid candidates, double delta);

  double delta() const { return delta_; }
  double log_threshold() const { return log_threshold_; }
  std::size_t size() const { return candidates_->size(); }
  std::size_t active_count() const { return active_count_; }
  const std::vector<ProbVector>& candidates() const { return *candidates_; }
  const CandidateGrid& grid() const { return candidates_; }

  bool is_active(std::size_t i) const { return active_[i] != 0; }
  LogValue running_max(std::size_t i) const { return LogValue(running_max_[i]); }

  /// Index of the candidate equal to m within 1e-12, or size() if none.
  std::size_t find(const ProbVector& m) const;
  /// Membership of a grid candidate; throws if m is not on the grid.
  bool contains(const ProbVector& m) const;

  /// Folds the current log-wealth of every active candidate into its running
  /// maximum and deactivates those at or above ln(1/δ). The kernel is any
  /// callable ProbVector -> LogValue describing the current wealth state.
  template <class Kernel>
  void update(Kernel&& log_wealth) {
    for (std::size_t i = 0; i < active_.size(); ++i) {
      if (!active_[i]) continue;
      record(i, LogValue(log_wealth((*candidates_)[i])));
    }
  }

  /// Same as update() for a kernel that receives the candidate index.
  template <class Kernel>
  void update_indexed(Kernel&& log_wealth) {
    for (std::size_t i = 0; i < active_.size(); ++i) {
      if (!active_[i]) continue;
      record(i, LogValue(log_wealth(i)));
    }
  }

  /// One CSV row per candidate: coordinates, running max log-wealth, active flag.
  void write_csv(std::ostream& os) const;

 private:
  void record(std::size_t i, LogValue v);

  CandidateGrid candidates_;
  double delta_;
  double log_threshold_;
  std::vector<double> running_max_;
  std::vector<char> active_;
  std::size_t active_count_;
};

/// Builds a set on the candidate grid and folds in the kernel's current wealth.
template <class Kernel>
ConfidenceSet realize_on_grid(Kernel&& log_wealth, CandidateGrid candidates, double delta) {
  ConfidenceSet set(std::move(candidates), delta);
  set.update(std::forward<Kernel>(log_wealth));
  return set;
}

/// Fraction of grid candidates still active (grid measure, not Lebesgue).
double relative_volume(const ConfidenceSet& set);

/// Boundary points of the sublevel set {m : log_wealth(m) < ln(1/δ)} along
/// `rays` directions from an interior center (K = 3), found by bisection.
/// Relies on the set being convex.
template <class Kernel>
std::vector<ProbVector> refine_boundary(Kernel&& log_wealth, const ProbVector& center, double delta,
                                        std::size_t rays, int steps = 16);

}  // namespace cseq

#include "cseq/detail/boundary.hpp"

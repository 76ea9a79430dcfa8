#pragma once

// Reduction of [0,1]^{K-1}-valued observations to the simplex Δ^{K-1}:
// ỹ_j = y_j/(K−1) for j < K and ỹ_K = 1 − Σ_j y_j/(K−1). A box-level
// confidence set is the preimage of the simplex-level set under this map.

#include <span>
#include <vector>

#include "cseq/confset.hpp"
#include "cseq/simplex.hpp"

namespace cseq {

class BoxObservation {
 public:
  /// Each coordinate must lie in [0,1] within 1e-9; values are clamped into [0,1].
  explicit BoxObservation(std::vector<double> coords);

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t j) const { return coords_[j]; }
  std::span<const double> coords() const { return coords_; }

 private:
  std::vector<double> coords_;
};

/// Probability-vector representation of dimension K = box dimension + 1.
ProbVector embed(const BoxObservation& y);

/// Inverse of embed on its image: the first K−1 coordinates times (K−1).
BoxObservation project(const ProbVector& m);

/// Membership of a box candidate in a simplex-level grid set; the embedded
/// candidate must be one of the set's grid points.
bool box_membership(const BoxObservation& m_box, const ConfidenceSet& simplex_set);

/// Membership of a box candidate against a simplex wealth kernel directly.
template <class Kernel>
bool box_membership(const BoxObservation& m_box, Kernel&& log_wealth, double delta) {
  return membership(LogValue(log_wealth(embed(m_box))), delta);
}

/// The box lattice {0, 1/G, ..., 1}^{K−1}, embedded into the simplex.
std::vector<ProbVector> embedded_box_grid(std::size_t box_dim, std::int64_t resolution);

}  // namespace cseq

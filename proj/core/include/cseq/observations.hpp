#pragma once

// Observation files: one row per step, either a 1-based category label, K
// decimals on the simplex, or K−1 decimals in [0,1] (box mode, embedded on
// ingest). Blank lines, '#' comments and a non-numeric header are skipped.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "cseq/simplex.hpp"

namespace cseq {

struct Observations {
  bool categorical = false;
  std::size_t dim = 0;
  std::vector<std::size_t> labels;  // 0-based; categorical only
  std::vector<ProbVector> points;   // one-hot rows in categorical mode

  std::vector<double> sums() const;
  CountVector counts() const;  // categorical only
};

/// k_hint (0 = unknown) fixes K for categorical rows and is checked otherwise.
Observations read_observations(std::istream& in, bool box, std::size_t k_hint = 0);
Observations read_observations_file(const std::string& path, bool box, std::size_t k_hint = 0);

}  // namespace cseq

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "cseq/simplex.hpp"

namespace cseq {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Independent generator for one trial; depends only on (seed, trial).
std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t trial);

/// T i.i.d. category labels (0-based) with law mu.
std::vector<std::size_t> gen_categorical(const ProbVector& mu, std::int64_t horizon, std::mt19937_64& rng);

/// T i.i.d. Dirichlet(conc) points, from normalized gamma variates.
std::vector<ProbVector> gen_dirichlet(std::span<const double> conc, std::int64_t horizon, std::mt19937_64& rng);

/// Uniform random ordering of the multiset described by the census.
std::vector<std::size_t> gen_wor(const CountVector& census, std::mt19937_64& rng);

}  // namespace cseq

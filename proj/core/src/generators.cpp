#include "cseq/generators.hpp"

#include <algorithm>
#include <stdexcept>

namespace cseq {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t trial) {
  return std::mt19937_64(mix64(mix64(seed) ^ mix64(trial ^ 0x5851f42d4c957f2dULL)));
}

namespace {

// Uniform on [0,1) from the top 53 bits; avoids implementation-defined
// distribution algorithms so streams agree across standard libraries.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::vector<std::size_t> gen_categorical(const ProbVector& mu, std::int64_t horizon, std::mt19937_64& rng) {
  if (horizon < 0) throw std::invalid_argument("gen_categorical: negative horizon");
  std::vector<double> cdf(mu.dim());
  double acc = 0.0;
  for (std::size_t j = 0; j < mu.dim(); ++j) cdf[j] = acc += mu[j];
  std::size_t last = mu.dim() - 1;
  while (last > 0 && mu[last] == 0.0) --last;

  std::vector<std::size_t> out(static_cast<std::size_t>(horizon));
  for (auto& z : out) {
    const double u = unit_uniform(rng) * acc;
    std::size_t j = 0;
    while (j < last && u >= cdf[j]) ++j;
    z = j;
  }
  return out;
}

std::vector<ProbVector> gen_dirichlet(std::span<const double> conc, std::int64_t horizon, std::mt19937_64& rng) {
  if (conc.size() < 2) throw std::invalid_argument("gen_dirichlet: need at least two concentrations");
  for (double a : conc) {
    if (!(a > 0.0)) throw std::invalid_argument("gen_dirichlet: concentrations must be positive");
  }
  std::vector<std::gamma_distribution<double>> gammas;
  for (double a : conc) gammas.emplace_back(a, 1.0);

  std::vector<ProbVector> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(horizon, 0)));
  std::vector<double> g(conc.size());
  for (std::int64_t t = 0; t < horizon; ++t) {
    double sum = 0.0;
    do {
      sum = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) sum += g[j] = gammas[j](rng);
    } while (!(sum > 0.0));
    for (double& x : g) x /= sum;
    out.emplace_back(g);
  }
  return out;
}

std::vector<std::size_t> gen_wor(const CountVector& census, std::mt19937_64& rng) {
  std::vector<std::size_t> out;
  out.reserve(static_cast<std::size_t>(census.total()));
  for (std::size_t j = 0; j < census.dim(); ++j) out.insert(out.end(), static_cast<std::size_t>(census[j]), j);
  for (std::size_t i = out.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(unit_uniform(rng) * static_cast<double>(i));
    std::swap(out[i - 1], out[std::min(j, i - 1)]);
  }
  return out;
}

}  // namespace cseq

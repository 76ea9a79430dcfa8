#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cseq {

template <class Kernel>
std::vector<ProbVector> refine_boundary(Kernel&& log_wealth, const ProbVector& center, double delta,
                                        std::size_t rays, int steps) {
  if (center.dim() != 3) throw std::invalid_argument("refine_boundary: only K = 3 is supported");
  const double threshold = log_inverse_delta(delta);
  auto inside = [&](const ProbVector& m) { return LogValue(log_wealth(m)).value() < threshold; };
  if (!inside(center)) throw std::invalid_argument("refine_boundary: center is not in the set");

  // Orthonormal basis of the plane {x : x_1 + x_2 + x_3 = 0}.
  const double u[3] = {1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0};
  const double v[3] = {1.0 / std::sqrt(6.0), 1.0 / std::sqrt(6.0), -2.0 / std::sqrt(6.0)};

  auto point = [&](const double* d, double s) {
    std::vector<double> c(3);
    for (std::size_t j = 0; j < 3; ++j) c[j] = std::max(0.0, center[j] + s * d[j]);
    return ProbVector(std::move(c));
  };

  std::vector<ProbVector> out;
  out.reserve(rays);
  for (std::size_t r = 0; r < rays; ++r) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(rays);
    double d[3];
    for (std::size_t j = 0; j < 3; ++j) d[j] = std::cos(theta) * u[j] + std::sin(theta) * v[j];
    double s_max = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < 3; ++j) {
      if (d[j] < 0.0) s_max = std::min(s_max, center[j] / -d[j]);
    }
    if (inside(point(d, s_max))) {
      out.push_back(point(d, s_max));
      continue;
    }
    double lo = 0.0;
    double hi = s_max;
    for (int i = 0; i < steps; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (inside(point(d, mid))) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    out.push_back(point(d, lo));
  }
  return out;
}

}  // namespace cseq

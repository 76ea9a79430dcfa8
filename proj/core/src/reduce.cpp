#include "cseq/reduce.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cseq {

BoxObservation::BoxObservation(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw std::invalid_argument("BoxObservation: need at least one coordinate");
  for (double& c : coords_) {
    if (!(c >= -kSimplexTolerance && c <= 1.0 + kSimplexTolerance)) {
      throw std::invalid_argument("BoxObservation: coordinate " + std::to_string(c) + " outside [0,1]");
    }
    c = std::clamp(c, 0.0, 1.0);
  }
}

ProbVector embed(const BoxObservation& y) {
  const double scale = static_cast<double>(y.dim());
  std::vector<double> out(y.dim() + 1);
  double sum = 0.0;
  for (std::size_t j = 0; j < y.dim(); ++j) {
    out[j] = y[j] / scale;
    sum += y[j];
  }
  out.back() = std::max(0.0, 1.0 - sum / scale);
  return ProbVector(std::move(out));
}

BoxObservation project(const ProbVector& m) {
  const double scale = static_cast<double>(m.dim() - 1);
  std::vector<double> out(m.dim() - 1);
  for (std::size_t j = 0; j + 1 < m.dim(); ++j) out[j] = m[j] * scale;
  return BoxObservation(std::move(out));
}

bool box_membership(const BoxObservation& m_box, const ConfidenceSet& simplex_set) {
  return simplex_set.contains(embed(m_box));
}

std::vector<ProbVector> embedded_box_grid(std::size_t box_dim, std::int64_t resolution) {
  if (box_dim < 1 || resolution < 1) throw std::invalid_argument("embedded_box_grid: bad shape");
  std::vector<ProbVector> out;
  std::vector<std::int64_t> idx(box_dim, 0);
  const double g = static_cast<double>(resolution);
  while (true) {
    std::vector<double> coords(box_dim);
    for (std::size_t j = 0; j < box_dim; ++j) coords[j] = static_cast<double>(idx[j]) / g;
    out.push_back(embed(BoxObservation(std::move(coords))));
    std::size_t j = 0;
    while (j < box_dim && idx[j] == resolution) idx[j++] = 0;
    if (j == box_dim) break;
    ++idx[j];
  }
  return out;
}

}  // namespace cseq

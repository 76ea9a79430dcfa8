// Universal-portfolio dynamic program and wealth evaluation.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cseq/wealth.hpp"

namespace cseq {

namespace {

// Walks G_{K,t} in lattice order one block at a time. A block fixes the
// partial sums s_2..s_{K-1} and covers s_1 = 0..s_2 at consecutive indices.
// s_[0] = 0 and s_[K] = t are sentinels; for K = 2 there is a single block.
class BlockWalker {
 public:
  BlockWalker(std::size_t k, std::int64_t t) : k_(k), s_(k + 1, 0) { s_[k] = t; }

  std::int64_t s(std::size_t i) const { return s_[i]; }
  std::int64_t width() const { return s_[2] + 1; }
  // k_j for j >= 3 (1-based), constant within a block.
  std::int64_t outer_count(std::size_t j) const { return s_[j] - s_[j - 1]; }

  bool next() {
    std::size_t i = 2;
    while (i < k_ && s_[i] == s_[i + 1]) ++i;
    if (i >= k_) return false;
    ++s_[i];
    for (std::size_t j = 2; j < i; ++j) s_[j] = 0;
    return true;
  }

 private:
  std::size_t k_;
  std::vector<std::int64_t> s_;
};

// Largest t·(per-unit log-odds spread) accepted by the scaled evaluation.
constexpr double kScaledExponentLimit = 600.0;

}  // namespace

UpState::UpState(std::size_t k, DirichletPrior prior, std::uint64_t cap)
    : k_(k), prior_(std::move(prior)), cap_(cap), table_(1, 0.0), reaches_(k, 0) {
  if (k < 2) throw std::invalid_argument("UpState: dimension must be at least 2");
  if (prior_.dim() != k) throw std::invalid_argument("UpState: prior dimension mismatch");
}

void UpState::absorb(const ProbVector& y) {
  if (y.dim() != k_) {
    throw std::invalid_argument("UpState::absorb: observation dimension " + std::to_string(y.dim()) +
                                " != " + std::to_string(k_));
  }
  const std::int64_t t1 = t_ + 1;
  check_grid_cap(k_, t1, cap_);
  const std::size_t n1 = grid_size(k_, t1);
  const BinomialTable binom(static_cast<std::size_t>(t1) + k_ + 1, k_ + 1);

  std::vector<double> ly(k_);
  for (std::size_t j = 0; j < k_; ++j) ly[j] = y[j] > 0.0 ? std::log(y[j]) : -kInf;

  scratch_.assign(n1, -kInf);
  const double* old = table_.data();
  double* out = scratch_.data();

  // offsets[j] (1-based j in 2..K-1) = Σ_{i=j}^{K-1} C(s_i + i - 2, i - 1).
  std::vector<std::uint64_t> offsets(k_ + 1, 0);
  // Predecessors whose validity is fixed within a block: (index offset, ln y_j).
  std::vector<std::pair<std::uint64_t, double>> fixed;
  fixed.reserve(k_);

  BlockWalker walk(k_, t1);
  std::size_t idx = 0;
  do {
    offsets[k_] = 0;
    for (std::size_t j = k_ - 1; j >= 2; --j) {
      const auto jj = static_cast<std::int64_t>(j);
      offsets[j] = offsets[j + 1] + binom(walk.s(j) + jj - 2, jj - 1);
    }
    const std::uint64_t off2 = k_ == 2 ? 0 : offsets[2];
    const std::uint64_t off1 = off2 + 1;
    fixed.clear();
    if (k_ >= 3) {
      for (std::size_t j = 3; j < k_; ++j) {
        if (walk.outer_count(j) >= 1) fixed.emplace_back(offsets[j], ly[j - 1]);
      }
      if (t1 - walk.s(k_ - 1) >= 1) fixed.emplace_back(0, ly[k_ - 1]);
    }

    const std::int64_t s2 = walk.s(2);
    for (std::int64_t s1 = 0; s1 <= s2; ++s1, ++idx) {
      double vals[64];
      std::size_t nv = 0;
      if (s1 >= 1) vals[nv++] = old[idx - off1] + ly[0];
      if (s2 - s1 >= 1) vals[nv++] = old[idx - off2] + ly[1];
      for (const auto& [off, l] : fixed) vals[nv++] = old[idx - off] + l;
      double mx = -kInf;
      for (std::size_t v = 0; v < nv; ++v) mx = std::max(mx, vals[v]);
      if (mx == -kInf) continue;
      double sum = 0.0;
      for (std::size_t v = 0; v < nv; ++v) sum += std::exp(vals[v] - mx);
      out[idx] = mx + std::log(sum);
    }
  } while (walk.next());

  table_.swap(scratch_);
  t_ = t1;
  for (std::size_t j = 0; j < k_; ++j) {
    if (y[j] > 0.0) reaches_[j] = 1;
  }
}

UpState up_absorb(const UpState& state, const ProbVector& y) {
  UpState next = state;
  next.absorb(y);
  return next;
}

UpWealthEvaluator::UpWealthEvaluator(const UpState& state)
    : k_(state.dim()), t_(state.t()), argmax_counts_(state.dim(), 0), reaches_(state.dim()) {
  for (std::size_t j = 0; j < k_; ++j) reaches_[j] = state.reaches(j);
  const DirichletPrior& prior = state.prior();
  const auto width = static_cast<std::size_t>(t_) + 1;
  std::vector<double> lg(k_ * width);
  for (std::size_t j = 0; j < k_; ++j) {
    for (std::size_t v = 0; v < width; ++v) lg[j * width + v] = std::lgamma(static_cast<double>(v) + prior[j]);
  }
  const double base = -std::lgamma(static_cast<double>(t_) + prior.total()) - prior.log_beta();

  std::span<const double> table = state.table();
  coeff_.resize(table.size());
  std::size_t idx = 0;
  std::size_t best = 0;
  BlockWalker walk(k_, t_);
  do {
    double outer = base;
    for (std::size_t j = 3; j <= k_; ++j) {
      const std::int64_t kj = j < k_ ? walk.outer_count(j) : t_ - walk.s(k_ - 1);
      outer += lg[(j - 1) * width + static_cast<std::size_t>(kj)];
    }
    const std::int64_t s2 = walk.s(2);
    for (std::int64_t s1 = 0; s1 <= s2; ++s1, ++idx) {
      const double c = table[idx] + outer + lg[static_cast<std::size_t>(s1)] +
                       lg[width + static_cast<std::size_t>(s2 - s1)];
      coeff_[idx] = c;
      if (c > coeff_max_) {
        coeff_max_ = c;
        best = idx;
      }
    }
  } while (walk.next());

  lin_coeff_.resize(coeff_.size());
  for (std::size_t i = 0; i < coeff_.size(); ++i) lin_coeff_[i] = std::exp(coeff_[i] - coeff_max_);

  // Recover the argmax count vector from its rank.
  const GridIndex grid(k_, t_, ~std::uint64_t{0});
  const CountVector kstar = grid.unrank(best);
  for (std::size_t j = 0; j < k_; ++j) argmax_counts_[j] = kstar[j];
}

bool UpWealthEvaluator::infinite_at(const ProbVector& m) const {
  for (std::size_t j = 0; j < k_; ++j) {
    if (m[j] == 0.0 && reaches_[j]) return true;
  }
  return false;
}

bool UpWealthEvaluator::evaluate_scaled(const ProbVector& m, double& out) const {
  // Per-coordinate log-odds ell_j = -ln m_j, recentred by lambda so that the
  // dominant lattice term has product exactly 1 and S >= 1.
  std::vector<double> ell(k_, 0.0);
  double lambda = 0.0;
  for (std::size_t j = 0; j < k_; ++j) {
    if (m[j] > 0.0) {
      ell[j] = -std::log(m[j]);
      lambda += static_cast<double>(argmax_counts_[j]) * ell[j];
    }
  }
  lambda /= static_cast<double>(t_);
  double spread = 0.0;
  for (std::size_t j = 0; j < k_; ++j) {
    if (m[j] > 0.0) spread = std::max(spread, ell[j] - lambda);
  }
  if (spread * static_cast<double>(t_) > kScaledExponentLimit) return false;

  const auto width = static_cast<std::size_t>(t_) + 1;
  std::vector<double> powers(k_ * width);
  for (std::size_t j = 0; j < k_; ++j) {
    double* p = powers.data() + j * width;
    if (m[j] > 0.0) {
      const double e = ell[j] - lambda;
      for (std::size_t v = 0; v < width; ++v) p[v] = std::exp(static_cast<double>(v) * e);
    } else {
      p[0] = 1.0;
      for (std::size_t v = 1; v < width; ++v) p[v] = 0.0;
    }
  }

  const double* lin = lin_coeff_.data();
  const double* p1 = powers.data();
  const double* p2 = powers.data() + width;
  double total = 0.0;
  std::size_t idx = 0;
  BlockWalker walk(k_, t_);
  do {
    double w = 1.0;
    for (std::size_t j = 3; j <= k_; ++j) {
      const std::int64_t kj = j < k_ ? walk.outer_count(j) : t_ - walk.s(k_ - 1);
      w *= powers[(j - 1) * width + static_cast<std::size_t>(kj)];
    }
    const std::int64_t s2 = walk.s(2);
    const auto n = static_cast<std::size_t>(s2) + 1;
    if (w != 0.0) {
      double acc = 0.0;
      const double* c = lin + idx;
      const double* q = p2 + s2;
      for (std::size_t s1 = 0; s1 < n; ++s1) acc += c[s1] * p1[s1] * q[-static_cast<std::ptrdiff_t>(s1)];
      total += w * acc;
    }
    idx += n;
  } while (walk.next());

  if (!std::isfinite(total) || total < 0.5) return false;
  out = coeff_max_ + static_cast<double>(t_) * lambda + std::log(total);
  return true;
}

LogValue UpWealthEvaluator::evaluate_log_domain(const ProbVector& m) const {
  if (m.dim() != k_) throw std::invalid_argument("UpWealthEvaluator: candidate dimension mismatch");
  std::vector<double> ell(k_);
  for (std::size_t j = 0; j < k_; ++j) ell[j] = m[j] > 0.0 ? -std::log(m[j]) : kInf;

  std::vector<double> terms(coeff_.size(), -kInf);
  std::vector<std::int64_t> k(k_);
  std::size_t idx = 0;
  BlockWalker walk(k_, t_);
  do {
    for (std::size_t j = 3; j <= k_; ++j) k[j - 1] = j < k_ ? walk.outer_count(j) : t_ - walk.s(k_ - 1);
    const std::int64_t s2 = walk.s(2);
    for (std::int64_t s1 = 0; s1 <= s2; ++s1, ++idx) {
      if (coeff_[idx] == -kInf) continue;
      k[0] = s1;
      k[1] = s2 - s1;
      double term = coeff_[idx];
      for (std::size_t j = 0; j < k_; ++j) {
        if (k[j] == 0) continue;
        if (ell[j] == kInf) return LogValue::infinite();
        term += static_cast<double>(k[j]) * ell[j];
      }
      terms[idx] = term;
    }
  } while (walk.next());
  return LogValue(log_sum_exp(terms));
}

LogValue UpWealthEvaluator::operator()(const ProbVector& m) const {
  if (m.dim() != k_) throw std::invalid_argument("UpWealthEvaluator: candidate dimension mismatch");
  if (t_ == 0) return LogValue::unit_wealth();
  if (infinite_at(m)) return LogValue::infinite();
  double out = 0.0;
  if (evaluate_scaled(m, out)) return LogValue(out);
  return evaluate_log_domain(m);
}

LogValue up_log_wealth(const UpState& state, const ProbVector& m) {
  return UpWealthEvaluator(state)(m);
}

}  // namespace cseq

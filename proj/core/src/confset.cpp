#include "cseq/confset.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cseq {

namespace {

double counts_total(std::span<const double> counts) {
  double t = 0.0;
  for (double c : counts) t += c;
  return t;
}

void write_double(std::ostream& os, double x) {
  if (x == kInf) {
    os << "inf";
  } else if (x == -kInf) {
    os << "-inf";
  } else {
    os << x;
  }
}

}  // namespace

bool membership(LogValue log_wealth, double delta) {
  return log_wealth.value() < log_inverse_delta(delta);
}

double kt_kl_threshold(std::span<const double> counts, double delta, const DirichletPrior& prior) {
  const double t = counts_total(counts);
  if (!(t > 0.0)) throw std::invalid_argument("kt_kl_threshold: needs at least one observation");
  std::vector<double> mu_hat(counts.begin(), counts.end());
  for (double& x : mu_hat) x /= t;
  const double h = shannon_entropy(mu_hat);
  return (log_inverse_delta(delta) - t * h - q_kt(counts, prior).value()) / t;
}

bool kt_kl_membership(std::span<const double> counts, const ProbVector& m, double delta,
                      const DirichletPrior& prior) {
  const double t = counts_total(counts);
  std::vector<double> mu_hat(counts.begin(), counts.end());
  for (double& x : mu_hat) x /= t;
  return kl_divergence(mu_hat, m.coords()) < kt_kl_threshold(counts, delta, prior);
}

std::vector<double> thm3b_lower_bound(const CountVector& counts, double delta, const DirichletPrior& prior) {
  const std::int64_t t = counts.total();
  if (t < 1) throw std::invalid_argument("thm3b_lower_bound: needs at least one observation");
  // Membership reads sum_i k_i ln(1/m_i) < ln(1/(δq)); every term is
  // nonnegative, so each one alone is below the right-hand side.
  const double log_dq = std::log(delta) + q_kt(counts, prior).value();
  std::vector<double> out(counts.dim(), 0.0);
  for (std::size_t j = 0; j < counts.dim(); ++j) {
    if (counts[j] > 0) out[j] = std::exp(log_dq / static_cast<double>(counts[j]));
  }
  return out;
}

double thm3c_asymptotic_threshold(std::int64_t t, std::size_t k, double delta) {
  if (t < 2) throw std::invalid_argument("thm3c_asymptotic_threshold: needs t >= 2");
  const double td = static_cast<double>(t);
  return log_inverse_delta(delta) / td + static_cast<double>(k - 1) / (2.0 * td) * std::log(td);
}

std::int64_t default_grid_resolution(std::size_t k) {
  if (k <= 3) return 100;
  if (k == 4) return 40;
  return 20;
}

CandidateGrid make_candidate_grid(std::vector<ProbVector> candidates) {
  if (candidates.empty()) throw std::invalid_argument("candidate grid must be nonempty");
  return std::make_shared<const std::vector<ProbVector>>(std::move(candidates));
}

ConfidenceSet::ConfidenceSet(CandidateGrid candidates, double delta)
    : candidates_(std::move(candidates)),
      delta_(delta),
      log_threshold_(log_inverse_delta(delta)),
      running_max_(candidates_ ? candidates_->size() : 0, 0.0),
      active_(running_max_.size(), 1),
      active_count_(running_max_.size()) {
  if (!candidates_ || candidates_->empty()) throw std::invalid_argument("ConfidenceSet: empty candidate grid");
}

void ConfidenceSet::record(std::size_t i, LogValue v) {
  if (v.value() > running_max_[i]) running_max_[i] = v.value();
  if (running_max_[i] >= log_threshold_) {
    active_[i] = 0;
    --active_count_;
  }
}

std::size_t ConfidenceSet::find(const ProbVector& m) const {
  const auto& cands = *candidates_;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (cands[i].dim() != m.dim()) continue;
    bool same = true;
    for (std::size_t j = 0; j < m.dim() && same; ++j) same = std::abs(cands[i][j] - m[j]) <= 1e-12;
    if (same) return i;
  }
  return cands.size();
}

bool ConfidenceSet::contains(const ProbVector& m) const {
  const std::size_t i = find(m);
  if (i == size()) throw std::invalid_argument("ConfidenceSet::contains: " + m.to_string() + " is not a grid candidate");
  return is_active(i);
}

void ConfidenceSet::write_csv(std::ostream& os) const {
  const auto& cands = *candidates_;
  const std::size_t k = cands.front().dim();
  for (std::size_t j = 0; j < k; ++j) os << 'm' << (j + 1) << ',';
  os << "running_max_log_wealth,active\n";
  const auto old_precision = os.precision(17);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    for (std::size_t j = 0; j < k; ++j) os << cands[i][j] << ',';
    write_double(os, running_max_[i]);
    os << ',' << (active_[i] ? 1 : 0) << '\n';
  }
  os.precision(old_precision);
}

double relative_volume(const ConfidenceSet& set) {
  return static_cast<double>(set.active_count()) / static_cast<double>(set.size());
}

}  // namespace cseq

#include "cseq/wor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cseq {

std::string_view to_string(WorMethod method) {
  switch (method) {
    case WorMethod::kWorKt:
      return "wor-kt";
    case WorMethod::kPpr:
      return "ppr";
    case WorMethod::kPerRound:
      return "perround";
  }
  return "?";
}

WorMethod parse_wor_method(std::string_view name) {
  if (name == "wor-kt" || name == "kt") return WorMethod::kWorKt;
  if (name == "ppr") return WorMethod::kPpr;
  if (name == "perround") return WorMethod::kPerRound;
  throw std::invalid_argument("unknown WoR method '" + std::string(name) + "' (expected wor-kt, ppr, perround)");
}

bool intervals_disjoint(std::span<const CountInterval> intervals) {
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    for (std::size_t j = i + 1; j < intervals.size(); ++j) {
      const bool apart = intervals[i].upper < intervals[j].lower || intervals[j].upper < intervals[i].lower;
      if (!apart) return false;
    }
  }
  return true;
}

AuditState::AuditState(std::int64_t population, std::size_t k, WorMethod method, double delta,
                       DirichletPrior prior, std::uint64_t cap)
    : population_(population),
      k_(k),
      method_(method),
      delta_(delta),
      log_threshold_(log_inverse_delta(delta)),
      prior_(std::move(prior)),
      total_(0),
      drawn_(CountVector::zeros(k)),
      log_fact_(population + 1) {
  if (population < 1) throw std::invalid_argument("AuditState: population must be positive");
  if (k < 2) throw std::invalid_argument("AuditState: need at least two categories");
  if (prior_.dim() != k) throw std::invalid_argument("AuditState: prior dimension mismatch");
  if (population > std::numeric_limits<std::int32_t>::max()) {
    throw std::invalid_argument("AuditState: population too large");
  }
  check_grid_cap(k, population, cap);
  total_ = grid_size(k, population);

  const auto width = static_cast<std::size_t>(population) + 1;
  log_int_.resize(width);
  log_int_[0] = -kInf;
  for (std::size_t v = 1; v < width; ++v) log_int_[v] = std::log(static_cast<double>(v));
  log_gamma_alpha_.resize(k * width);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t v = 0; v < width; ++v) {
      log_gamma_alpha_[j * width + v] = std::lgamma(static_cast<double>(v) + prior_[j]);
    }
  }

  censuses_.reserve(total_ * k);
  for (const CountVector& c : enumerate_grid(k, population, cap)) {
    for (std::size_t j = 0; j < k; ++j) censuses_.push_back(static_cast<std::int32_t>(c[j]));
  }
  running_max_.assign(total_, 0.0);
  current_.assign(total_, 0.0);
}

void AuditState::absorb(std::size_t category) {
  if (category >= k_) {
    throw std::out_of_range("AuditState::absorb: category " + std::to_string(category + 1) +
                            " outside 1.." + std::to_string(k_));
  }
  const std::int64_t t_prev = drawn_.total();
  if (t_prev + 1 >= population_) {
    throw std::invalid_argument("AuditState::absorb: the guarantee covers t in [1, N-1]; t would reach N = " +
                                std::to_string(population_));
  }
  const std::int64_t k_prev = drawn_[category];
  drawn_.increment(category);
  const std::int64_t t = drawn_.total();
  const auto width = static_cast<std::size_t>(population_) + 1;

  double log_q = -std::lgamma(static_cast<double>(t) + prior_.total()) - prior_.log_beta();
  for (std::size_t j = 0; j < k_; ++j) log_q += log_gamma_alpha_[j * width + static_cast<std::size_t>(drawn_[j])];

  const std::size_t n = running_max_.size();
  switch (method_) {
    case WorMethod::kWorKt: {
      const double base = log_q + static_cast<double>(t) * log_int_[static_cast<std::size_t>(population_ - t)];
      for (std::size_t i = 0; i < n; ++i) {
        const std::int32_t* c = censuses_.data() + i * k_;
        double acc = base;
        for (std::size_t j = 0; j < k_; ++j) {
          const std::int64_t kj = drawn_[j];
          if (kj == 0) continue;
          const std::int64_t rem = c[j] - kj;
          if (rem <= 0) {
            acc = kInf;
            break;
          }
          acc -= static_cast<double>(kj) * log_int_[static_cast<std::size_t>(rem)];
        }
        current_[i] = acc;
      }
      break;
    }
    case WorMethod::kPpr: {
      const double base = log_q + log_fact_(population_) - log_fact_(population_ - t);
      for (std::size_t i = 0; i < n; ++i) {
        const std::int32_t* c = censuses_.data() + i * k_;
        double acc = base;
        for (std::size_t j = 0; j < k_; ++j) {
          const std::int64_t rem = c[j] - drawn_[j];
          if (rem < 0) {
            acc = kInf;
            break;
          }
          acc += log_fact_(rem) - log_fact_(c[j]);
        }
        current_[i] = acc;
      }
      break;
    }
    case WorMethod::kPerRound: {
      // Round t: KT predictive (K_{t-1,c} + alpha_c)/(t-1 + Σalpha) times odds
      // (N − t + 1)/(n_c − K_{t-1,c}).
      const double step = std::log((static_cast<double>(k_prev) + prior_[category]) /
                                   (static_cast<double>(t_prev) + prior_.total())) +
                          log_int_[static_cast<std::size_t>(population_ - t_prev)];
      for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t rem = censuses_[i * k_ + category] - k_prev;
        current_[i] = rem <= 0 ? kInf : current_[i] + step - log_int_[static_cast<std::size_t>(rem)];
      }
      break;
    }
  }
  for (std::size_t i = 0; i < n; ++i) running_max_[i] = std::max(running_max_[i], current_[i]);
  prune();
}

void AuditState::prune() {
  std::size_t out = 0;
  const std::size_t n = running_max_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (running_max_[i] >= log_threshold_) continue;
    if (out != i) {
      std::copy_n(censuses_.begin() + static_cast<std::ptrdiff_t>(i * k_), k_,
                  censuses_.begin() + static_cast<std::ptrdiff_t>(out * k_));
      running_max_[out] = running_max_[i];
      current_[out] = current_[i];
    }
    ++out;
  }
  censuses_.resize(out * k_);
  running_max_.resize(out);
  current_.resize(out);
}

bool AuditState::is_active(const CountVector& census) const { return running_max(census).has_value(); }

std::optional<LogValue> AuditState::running_max(const CountVector& census) const {
  if (census.dim() != k_) throw std::invalid_argument("AuditState: census dimension mismatch");
  for (std::size_t i = 0; i < running_max_.size(); ++i) {
    bool same = true;
    for (std::size_t j = 0; j < k_ && same; ++j) same = censuses_[i * k_ + j] == census[j];
    if (same) return LogValue(running_max_[i]);
  }
  return std::nullopt;
}

std::vector<CountVector> AuditState::active_censuses() const {
  std::vector<CountVector> out;
  out.reserve(running_max_.size());
  for (std::size_t i = 0; i < running_max_.size(); ++i) {
    out.emplace_back(std::vector<std::int64_t>(censuses_.begin() + static_cast<std::ptrdiff_t>(i * k_),
                                               censuses_.begin() + static_cast<std::ptrdiff_t>((i + 1) * k_)));
  }
  return out;
}

std::vector<CountInterval> AuditState::category_count_bounds() const {
  if (running_max_.empty()) {
    throw EmptyConfidenceSetError("category_count_bounds: every census has been excluded after " +
                                  std::to_string(t()) + " draws (drawn " + drawn_.to_string() +
                                  "); this signals a coverage failure or a misconfigured population");
  }
  std::vector<CountInterval> out(k_, CountInterval{population_, 0});
  for (std::size_t i = 0; i < running_max_.size(); ++i) {
    for (std::size_t j = 0; j < k_; ++j) {
      const std::int64_t c = censuses_[i * k_ + j];
      out[j].lower = std::min(out[j].lower, c);
      out[j].upper = std::max(out[j].upper, c);
    }
  }
  return out;
}

bool AuditState::rank_decided() const {
  if (running_max_.empty()) return false;
  return intervals_disjoint(category_count_bounds());
}

std::int64_t stopping_time(std::span<const std::size_t> draws, std::int64_t population, std::size_t k,
                           WorMethod method, double delta, const DirichletPrior& prior) {
  AuditState state(population, k, method, delta, prior);
  const std::int64_t last = std::min<std::int64_t>(static_cast<std::int64_t>(draws.size()), population - 1);
  for (std::int64_t t = 0; t < last; ++t) {
    state.absorb(draws[static_cast<std::size_t>(t)]);
    if (state.active_count() == 0) return population;
    if (state.rank_decided()) return state.t();
  }
  return population;
}

}  // namespace cseq

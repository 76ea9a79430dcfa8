#include "cseq/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cseq {

CoordinateWealths::CoordinateWealths(std::vector<double> log_wealths) : log_wealths_(std::move(log_wealths)) {
  if (log_wealths_.size() < 2) throw std::invalid_argument("CoordinateWealths: need K >= 2");
  for (double v : log_wealths_) LogValue{v};
}

LogValue kt2_log_wealth(double successes, double trials, double p, const DirichletPrior& binary_prior) {
  const double failures = trials - successes;
  const double counts[2] = {successes, failures < 0.0 ? 0.0 : failures};
  return kt_log_wealth(counts, ProbVector({p, 1.0 - p}, 1e-6), binary_prior);
}

CoordinateWealths CoordinateWealths::kt2(std::span<const double> counts, const ProbVector& m,
                                         const DirichletPrior& binary_prior) {
  if (counts.size() != m.dim()) throw std::invalid_argument("CoordinateWealths::kt2: dimension mismatch");
  double t = 0.0;
  for (double c : counts) t += c;
  std::vector<double> out(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    out[j] = kt2_log_wealth(counts[j], t, m[j], binary_prior).value();
  }
  return CoordinateWealths(std::move(out));
}

double CoordinateWealths::bonferroni_score() const {
  return *std::max_element(log_wealths_.begin(), log_wealths_.end()) -
         std::log(static_cast<double>(log_wealths_.size()));
}

double CoordinateWealths::mixture_score() const {
  // log_sum_exp >= max exactly (the max term contributes exp(0) = 1), so
  // mixture_score() >= bonferroni_score() holds in floating point too.
  return log_sum_exp(log_wealths_) - std::log(static_cast<double>(log_wealths_.size()));
}

bool bonferroni_membership(const CoordinateWealths& w, double delta) {
  const double threshold = std::log(static_cast<double>(w.dim())) + log_inverse_delta(delta);
  return std::all_of(w.log_wealths().begin(), w.log_wealths().end(),
                     [&](double v) { return v < threshold; });
}

bool mixture_membership(const CoordinateWealths& w, double delta) {
  return w.mixture_score() < log_inverse_delta(delta);
}

double sanov_radius(std::int64_t t, std::size_t k, double delta) {
  if (t < 1) throw std::invalid_argument("sanov_radius: needs t >= 1");
  const double td = static_cast<double>(t);
  return log_inverse_delta(delta) / td + static_cast<double>(k) / td * std::log(td + 1.0);
}

bool sanov_membership(const ProbVector& mu_hat, const ProbVector& m, std::int64_t t, std::size_t k,
                      double delta) {
  return kl_divergence(mu_hat.coords(), m.coords()) < sanov_radius(t, k, delta);
}

std::int64_t mardia_min_samples(std::size_t k) {
  const double kk = static_cast<double>(k) / std::numbers::e;
  return static_cast<std::int64_t>(std::ceil(8.0 * std::numbers::pi * kk * kk * kk));
}

std::optional<double> mardia_radius(std::int64_t t, std::size_t k, double delta) {
  if (t < mardia_min_samples(k)) return std::nullopt;
  const double km1 = static_cast<double>(k - 1);
  return km1 / static_cast<double>(t) * std::log(2.0 * km1 / delta);
}

std::optional<bool> mardia_membership(const ProbVector& mu_hat, const ProbVector& m, std::int64_t t,
                                      std::size_t k, double delta) {
  log_inverse_delta(delta);
  const auto radius = mardia_radius(t, k, delta);
  if (!radius) return std::nullopt;
  return kl_divergence(mu_hat.coords(), m.coords()) < *radius;
}

namespace {

constexpr double kCpTolerance = 1e-10;

// Bisection for the p where f(p) crosses target, given f increasing on [0,1].
template <class F>
double bisect_increasing(F&& f, double target) {
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > kCpTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Interval clopper_pearson_interval(std::int64_t successes, std::int64_t trials, double delta_prime) {
  if (trials < 0 || successes < 0 || successes > trials) {
    throw std::invalid_argument("clopper_pearson_interval: need 0 <= k <= n");
  }
  const double log_half = std::log(0.5 * delta_prime);
  log_inverse_delta(delta_prime);
  Interval out;
  if (successes > 0) {
    // P(Bin(n,p) >= k) increases in p.
    out.lower = bisect_increasing(
        [&](double p) { return log_binomial_tail(trials, successes, p, Tail::kUpper); }, log_half);
  }
  if (successes < trials) {
    // P(Bin(n,p) <= k) decreases in p; bisect its negation.
    out.upper = bisect_increasing(
        [&](double p) { return -log_binomial_tail(trials, successes, p, Tail::kLower); }, -log_half);
  }
  return out;
}

std::vector<Interval> cp_bonferroni_box(const CountVector& counts, double delta) {
  const double dprime = delta / static_cast<double>(counts.dim());
  std::vector<Interval> box(counts.dim());
  for (std::size_t j = 0; j < counts.dim(); ++j) {
    box[j] = clopper_pearson_interval(counts[j], counts.total(), dprime);
  }
  return box;
}

bool in_box(std::span<const Interval> box, const ProbVector& m) {
  if (box.size() != m.dim()) throw std::invalid_argument("in_box: dimension mismatch");
  for (std::size_t j = 0; j < box.size(); ++j) {
    if (m[j] < box[j].lower || m[j] > box[j].upper) return false;
  }
  return true;
}

}  // namespace cseq

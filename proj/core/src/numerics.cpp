#include "cseq/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cseq {

LogValue::LogValue(double value) : value_(value) {
  if (std::isnan(value)) throw std::domain_error("LogValue: NaN log-wealth");
}

double LogValue::wealth() const { return std::exp(value_); }

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("log_gamma: argument must be positive, got " + std::to_string(x));
  }
  if (std::isinf(x)) return kInf;
  // lgamma_r avoids the global signgam write of plain lgamma.
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double log_multi_beta(std::span<const double> a) {
  double sum = 0.0;
  double acc = 0.0;
  for (double ai : a) {
    if (!(ai > 0.0)) throw std::domain_error("log_multi_beta: non-positive argument");
    acc += log_gamma(ai);
    sum += ai;
  }
  return acc - log_gamma(sum);
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("kl_divergence: dimension mismatch");
  double d = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] == 0.0) continue;
    if (q[j] == 0.0) return kInf;
    d += p[j] * std::log(p[j] / q[j]);
  }
  // Rounding can leave tiny negatives when p ≈ q.
  return std::max(d, 0.0);
}

double shannon_entropy(std::span<const double> p) {
  double h = 0.0;
  for (double pj : p) h -= xlogy(pj, pj);
  return std::max(h, 0.0);
}

double log_factorial(std::int64_t n) {
  if (n < 0) throw std::domain_error("log_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double log_binomial_coefficient(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return -kInf;
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double log_binomial_pmf(std::int64_t n, std::int64_t k, double p) {
  if (k < 0 || k > n) return -kInf;
  const double kd = static_cast<double>(k);
  const double rest = static_cast<double>(n - k);
  const double lp = xlogy(kd, p);
  const double lq = xlogy(rest, 1.0 - p);
  if (lp == -kInf || lq == -kInf) return -kInf;
  return log_binomial_coefficient(n, k) + lp + lq;
}

double log_binomial_tail(std::int64_t n, std::int64_t k, double p, Tail side) {
  if (n < 0 || k < 0 || k > n) {
    throw std::out_of_range("log_binomial_tail: need 0 <= k <= n");
  }
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("log_binomial_tail: p outside [0,1]");
  const std::int64_t lo = side == Tail::kLower ? 0 : k;
  const std::int64_t hi = side == Tail::kLower ? k : n;
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (std::int64_t i = lo; i <= hi; ++i) terms.push_back(log_binomial_pmf(n, i, p));
  return std::min(log_sum_exp(terms), 0.0);
}

double log_add_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (a == -kInf || a == kInf) return a;
  return a + std::log1p(std::exp(b - a));
}

double log_sum_exp(std::span<const double> xs) {
  double m = -kInf;
  for (double x : xs) m = std::max(m, x);
  if (m == -kInf || m == kInf) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

double log_inverse_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::domain_error("delta must lie in (0,1), got " + std::to_string(delta));
  }
  return -std::log(delta);
}

LogFactorialTable::LogFactorialTable(std::int64_t capacity) {
  if (capacity < 1) capacity = 1;
  table_.resize(static_cast<std::size_t>(capacity));
  table_[0] = 0.0;
  for (std::size_t n = 1; n < table_.size(); ++n) {
    table_[n] = std::lgamma(static_cast<double>(n) + 1.0);
  }
}

}  // namespace cseq

#pragma once

// Log-domain primitives and special functions shared by the wealth kernels.
// All wealth arithmetic in this library happens on the natural-log scale:
// -inf is zero wealth, +inf is diverged wealth (hypothesis excluded).

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace cseq {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A wealth magnitude on the natural-log scale. Never NaN.
class LogValue {
 public:
  constexpr LogValue() = default;
  explicit LogValue(double value);

  static constexpr LogValue zero_wealth() { return LogValue(Raw{}, -kInf); }
  static constexpr LogValue unit_wealth() { return LogValue(); }
  static constexpr LogValue infinite() { return LogValue(Raw{}, kInf); }

  constexpr double value() const { return value_; }
  double wealth() const;
  constexpr bool is_infinite() const { return value_ == kInf; }
  constexpr bool is_zero_wealth() const { return value_ == -kInf; }

  friend constexpr auto operator<=>(const LogValue&, const LogValue&) = default;

 private:
  struct Raw {};
  constexpr LogValue(Raw, double v) : value_(v) {}
  double value_ = 0.0;
};

/// ln Γ(x) for x > 0; throws std::domain_error otherwise.
double log_gamma(double x);

/// ln B(a) = Σ ln Γ(a_i) − ln Γ(Σ a_i).
double log_multi_beta(std::span<const double> a);

/// D(p‖q) with 0·ln(0/q) = 0 and p_j > 0, q_j = 0 giving +inf.
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// H(p) = −Σ p_j ln p_j with 0·ln 0 = 0.
double shannon_entropy(std::span<const double> p);

enum class Tail { kLower, kUpper };

/// ln P(Bin(n,p) ≤ k) for kLower, ln P(Bin(n,p) ≥ k) for kUpper.
double log_binomial_tail(std::int64_t n, std::int64_t k, double p, Tail side);

double log_binomial_pmf(std::int64_t n, std::int64_t k, double p);
double log_binomial_coefficient(std::int64_t n, std::int64_t k);
double log_factorial(std::int64_t n);

/// ln(e^a + e^b), exact on infinities.
double log_add_exp(double a, double b);

/// Max-shifted log-sum-exp; returns -inf for an empty range.
double log_sum_exp(std::span<const double> xs);

/// ln(1/δ); throws std::domain_error unless 0 < δ < 1.
double log_inverse_delta(double delta);

/// x·ln(y) with the 0·ln(anything) = 0 convention (so 0^0 = 1).
inline double xlogy(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(y); }

/// Cached ln n! for n in [0, capacity).
class LogFactorialTable {
 public:
  explicit LogFactorialTable(std::int64_t capacity);
  double operator()(std::int64_t n) const { return table_[static_cast<std::size_t>(n)]; }
  std::int64_t capacity() const { return static_cast<std::int64_t>(table_.size()); }

 private:
  std::vector<double> table_;
};

}  // namespace cseq


#include "cseq/wealth.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cseq {

namespace {

// Below this, N·m − K_t is treated as an exhausted (zero) remaining count.
constexpr double kRemainingTolerance = 1e-9;

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
  }
}

double log_falling_factorial(std::int64_t n, std::int64_t k) {
  return log_factorial(n) - log_factorial(n - k);
}

}  // namespace

DirichletPrior::DirichletPrior(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) throw std::invalid_argument("DirichletPrior: empty parameter vector");
  for (double a : alpha_) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw std::invalid_argument("DirichletPrior: all concentrations must be positive and finite");
    }
    total_ += a;
  }
  log_beta_ = log_multi_beta(alpha_);
}

LogValue q_kt(std::span<const double> x, const DirichletPrior& prior) {
  require_same_dim(x.size(), prior.dim(), "q_kt");
  double acc = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double a = x[j] + prior[j];
    if (!(a > 0.0)) throw std::domain_error("q_kt: x + alpha must be positive");
    acc += log_gamma(a);
    total += a;
  }
  return LogValue(acc - log_gamma(total) - prior.log_beta());
}

LogValue q_kt(const CountVector& x, const DirichletPrior& prior) {
  const std::vector<double> xs = x.as_reals();
  return q_kt(xs, prior);
}

LogValue kt_log_wealth(std::span<const double> counts, const ProbVector& m, const DirichletPrior& prior) {
  require_same_dim(counts.size(), m.dim(), "kt_log_wealth");
  double acc = 0.0;
  for (std::size_t j = 0; j < counts.size(); ++j) {
    if (counts[j] == 0.0) continue;
    if (m[j] == 0.0) return LogValue::infinite();
    acc -= counts[j] * std::log(m[j]);
  }
  return LogValue(acc + q_kt(counts, prior).value());
}

LogValue kt_log_wealth(const CountVector& counts, const ProbVector& m, const DirichletPrior& prior) {
  const std::vector<double> xs = counts.as_reals();
  return kt_log_wealth(xs, m, prior);
}

LogValue constant_bettor_log_wealth(std::span<const ProbVector> obs, const ProbVector& b,
                                    const ProbVector& m) {
  require_same_dim(b.dim(), m.dim(), "constant_bettor_log_wealth");
  double acc = 0.0;
  for (const ProbVector& y : obs) {
    require_same_dim(y.dim(), m.dim(), "constant_bettor_log_wealth");
    double gain = 0.0;
    for (std::size_t j = 0; j < y.dim(); ++j) {
      if (y[j] == 0.0) continue;
      if (m[j] == 0.0) {
        throw std::invalid_argument(
            "constant_bettor_log_wealth: m_j = 0 while an observation has y_j > 0");
      }
      gain += b[j] * y[j] / m[j];
    }
    if (gain == 0.0) return LogValue::zero_wealth();
    acc += std::log(gain);
  }
  return LogValue(acc);
}

std::vector<double> wor_mean_transform(const ProbVector& m, const CountVector& drawn,
                                       std::int64_t population) {
  require_same_dim(m.dim(), drawn.dim(), "wor_mean_transform");
  const std::int64_t t = drawn.total();
  if (t >= population) {
    throw std::invalid_argument("wor_mean_transform: need t < N (t=" + std::to_string(t) +
                                ", N=" + std::to_string(population) + ")");
  }
  const double n = static_cast<double>(population);
  const double left = static_cast<double>(population - t);
  std::vector<double> out(m.dim());
  for (std::size_t j = 0; j < m.dim(); ++j) out[j] = (n * m[j] - static_cast<double>(drawn[j])) / left;
  return out;
}

LogValue wor_kt_log_wealth(const CountVector& drawn, const ProbVector& m, std::int64_t population,
                           const DirichletPrior& prior) {
  require_same_dim(m.dim(), drawn.dim(), "wor_kt_log_wealth");
  const std::int64_t t = drawn.total();
  if (t >= population) {
    throw std::invalid_argument("wor_kt_log_wealth: need t <= N-1 (t=" + std::to_string(t) +
                                ", N=" + std::to_string(population) + ")");
  }
  const double n = static_cast<double>(population);
  const double left = static_cast<double>(population - t);
  double acc = 0.0;
  for (std::size_t j = 0; j < m.dim(); ++j) {
    const double k = static_cast<double>(drawn[j]);
    const double remaining = n * m[j] - k;
    if (remaining < -kRemainingTolerance) return LogValue::infinite();
    if (k == 0.0) continue;
    if (remaining <= kRemainingTolerance) return LogValue::infinite();
    acc -= k * std::log(remaining / left);
  }
  return LogValue(acc + q_kt(drawn, prior).value());
}

CountVector census_from_mean(const ProbVector& m, std::int64_t population) {
  std::vector<std::int64_t> census(m.dim());
  for (std::size_t j = 0; j < m.dim(); ++j) {
    const double x = static_cast<double>(population) * m[j];
    const double r = std::round(x);
    if (std::abs(x - r) > 1e-9) {
      throw std::invalid_argument("N*m is not integer-valued (coordinate " + std::to_string(j) +
                                  " is " + std::to_string(x) + ")");
    }
    census[j] = static_cast<std::int64_t>(r);
  }
  CountVector c(std::move(census));
  if (c.total() != population) throw std::invalid_argument("census does not sum to N");
  return c;
}

LogValue perround_wor_log_wealth(std::span<const ProbVector> draws, const ProbVector& m,
                                 std::int64_t population, const DirichletPrior& prior) {
  const CountVector census = census_from_mean(m, population);
  CountVector drawn = CountVector::zeros(m.dim());
  for (const ProbVector& z : draws) {
    require_same_dim(z.dim(), m.dim(), "perround_wor_log_wealth");
    std::size_t hot = z.dim();
    for (std::size_t j = 0; j < z.dim(); ++j) {
      if (z[j] == 1.0) {
        hot = j;
      } else if (z[j] != 0.0) {
        hot = z.dim();
        break;
      }
    }
    if (hot == z.dim()) throw std::invalid_argument("perround_wor_log_wealth: draws must be one-hot");
    drawn.increment(hot);
  }
  const std::int64_t t = drawn.total();
  if (t >= population) throw std::invalid_argument("perround_wor_log_wealth: need t <= N-1");
  double acc = log_falling_factorial(population, t);
  for (std::size_t j = 0; j < m.dim(); ++j) {
    if (census[j] < drawn[j]) return LogValue::infinite();
    acc -= log_falling_factorial(census[j], drawn[j]);
  }
  return LogValue(acc + q_kt(drawn, prior).value());
}

LogValue ppr_log_wealth(const CountVector& drawn, const CountVector& census, const DirichletPrior& prior) {
  require_same_dim(drawn.dim(), census.dim(), "ppr_log_wealth");
  const std::int64_t population = census.total();
  const std::int64_t t = drawn.total();
  if (t >= population) {
    throw std::invalid_argument("ppr_log_wealth: need t <= N-1 (t=" + std::to_string(t) + ", N=" +
                                std::to_string(population) + ")");
  }
  double acc = log_factorial(population) - log_factorial(population - t);
  for (std::size_t j = 0; j < census.dim(); ++j) {
    if (census[j] < drawn[j]) return LogValue::infinite();
    acc += log_factorial(census[j] - drawn[j]) - log_factorial(census[j]);
  }
  return LogValue(acc + q_kt(drawn, prior).value());
}

}  // namespace cseq

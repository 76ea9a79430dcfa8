#include "cseq/simplex.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace cseq {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

std::vector<std::string_view> split_commas(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? text.size() : comma;
    std::string_view field = text.substr(start, end - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
      field.remove_suffix(1);
    }
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

ProbVector::ProbVector(std::vector<double> coords, double tolerance) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw std::invalid_argument("ProbVector: dimension must be at least 2");
  double sum = 0.0;
  for (double c : coords_) {
    if (!std::isfinite(c) || c < 0.0) {
      throw std::invalid_argument("ProbVector: coordinates must be finite and nonnegative");
    }
    sum += c;
  }
  if (std::abs(sum - 1.0) > tolerance) {
    std::ostringstream msg;
    msg << "ProbVector: coordinates sum to " << sum << ", not 1";
    throw std::invalid_argument(msg.str());
  }
}

ProbVector ProbVector::uniform(std::size_t k) {
  return ProbVector(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

ProbVector ProbVector::vertex(std::size_t k, std::size_t j) {
  std::vector<double> c(k, 0.0);
  c.at(j) = 1.0;
  return ProbVector(std::move(c));
}

ProbVector ProbVector::parse(std::string_view text) {
  std::vector<double> coords;
  for (std::string_view field : split_commas(text)) {
    coords.push_back(std::stod(std::string(field)));
  }
  return ProbVector(std::move(coords));
}

std::string ProbVector::to_string() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t j = 0; j < coords_.size(); ++j) {
    if (j) os << ',';
    os << coords_[j];
  }
  return os.str();
}

CountVector::CountVector(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
  for (std::int64_t c : counts_) {
    if (c < 0) throw std::invalid_argument("CountVector: negative count");
    total_ += c;
  }
}

CountVector CountVector::one_hot(std::size_t k, std::size_t j) {
  std::vector<std::int64_t> c(k, 0);
  c.at(j) = 1;
  return CountVector(std::move(c));
}

CountVector CountVector::parse(std::string_view text) {
  std::vector<std::int64_t> counts;
  for (std::string_view field : split_commas(text)) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) {
      throw std::invalid_argument("CountVector: cannot parse '" + std::string(field) + "'");
    }
    counts.push_back(v);
  }
  return CountVector(std::move(counts));
}

void CountVector::increment(std::size_t j) {
  ++counts_.at(j);
  ++total_;
}

std::vector<double> CountVector::as_reals() const {
  return std::vector<double>(counts_.begin(), counts_.end());
}

std::string CountVector::to_string() const {
  std::string s;
  for (std::size_t j = 0; j < counts_.size(); ++j) {
    if (j) s += ',';
    s += std::to_string(counts_[j]);
  }
  return s;
}

BinomialTable::BinomialTable(std::size_t max_n, std::size_t rows)
    : max_n_(max_n), rows_(rows), table_((max_n + 1) * rows, 0) {
  for (std::size_t n = 0; n <= max_n_; ++n) {
    for (std::size_t r = 0; r < rows_ && r <= n; ++r) {
      std::uint64_t v = 1;
      if (r > 0 && r < n) v = saturating_add(table_[(n - 1) * rows_ + r - 1], table_[(n - 1) * rows_ + r]);
      table_[n * rows_ + r] = v;
    }
  }
}

std::uint64_t BinomialTable::operator()(std::int64_t n, std::int64_t r) const {
  if (n < 0 || r < 0 || r > n) return 0;
  if (static_cast<std::size_t>(n) > max_n_ || static_cast<std::size_t>(r) >= rows_) {
    throw std::out_of_range("BinomialTable: index outside precomputed range");
  }
  return table_[static_cast<std::size_t>(n) * rows_ + static_cast<std::size_t>(r)];
}

__extension__ using Wide = unsigned __int128;

std::uint64_t grid_size(std::size_t k, std::int64_t t) {
  if (k == 0) return t == 0 ? 1 : 0;
  if (t < 0) return 0;
  // C(t + r, r) built incrementally: C(t+i, i) = C(t+i-1, i-1) * (t+i) / i.
  const std::uint64_t r = k - 1;
  Wide c = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    c = c * static_cast<Wide>(static_cast<std::uint64_t>(t) + i) / i;
    if (c > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(c);
}

void check_grid_cap(std::size_t k, std::int64_t t, std::uint64_t cap) {
  const std::uint64_t n = grid_size(k, t);
  if (n > cap) {
    std::ostringstream msg;
    msg << "lattice G_{" << k << "," << t << "} has " << n << " entries, exceeding the grid cap of "
        << cap << " entries";
    throw ResourceError(msg.str());
  }
}

GridIndex::GridIndex(std::size_t k, std::int64_t t, std::uint64_t cap)
    : k_(k), t_(t), size_(0), binom_(static_cast<std::size_t>(std::max<std::int64_t>(t, 0)) + k + 1, k + 1) {
  if (k < 1) throw std::invalid_argument("GridIndex: dimension must be positive");
  if (t < 0) throw std::invalid_argument("GridIndex: negative total");
  check_grid_cap(k, t, cap);
  size_ = grid_size(k, t);
}

std::uint64_t GridIndex::rank(const CountVector& k) const {
  if (k.dim() != k_ || k.total() != t_) {
    throw std::invalid_argument("GridIndex::rank: count vector " + k.to_string() + " not in G_{" +
                                std::to_string(k_) + "," + std::to_string(t_) + "}");
  }
  std::uint64_t r = 0;
  std::int64_t s = 0;
  for (std::size_t j = 1; j < k_; ++j) {
    s += k[j - 1];
    r += binom_(s + static_cast<std::int64_t>(j) - 1, static_cast<std::int64_t>(j));
  }
  return r;
}

CountVector GridIndex::unrank(std::uint64_t index) const {
  if (index >= size_) {
    throw std::out_of_range("GridIndex::unrank: index " + std::to_string(index) + " outside [0, " +
                            std::to_string(size_) + ")");
  }
  std::vector<std::int64_t> s(k_ + 1, 0);
  s[k_] = t_;
  for (std::size_t j = k_ - 1; j >= 1; --j) {
    std::int64_t v = 0;
    const auto jj = static_cast<std::int64_t>(j);
    while (v + 1 <= s[j + 1] && binom_(v + 1 + jj - 1, jj) <= index) ++v;
    s[j] = v;
    index -= binom_(v + jj - 1, jj);
  }
  std::vector<std::int64_t> counts(k_);
  for (std::size_t j = 0; j < k_; ++j) counts[j] = s[j + 1] - s[j];
  return CountVector(std::move(counts));
}

std::vector<CountVector> enumerate_grid(std::size_t k, std::int64_t t, std::uint64_t cap) {
  if (k < 1) throw std::invalid_argument("enumerate_grid: dimension must be positive");
  if (t < 0) throw std::invalid_argument("enumerate_grid: negative total");
  check_grid_cap(k, t, cap);
  std::vector<CountVector> out;
  out.reserve(grid_size(k, t));
  // Odometer over partial sums: s[1..k-1] with s[0] = 0 and s[k] = t.
  std::vector<std::int64_t> s(k + 1, 0);
  s[k] = t;
  std::vector<std::int64_t> counts(k);
  while (true) {
    for (std::size_t j = 0; j < k; ++j) counts[j] = s[j + 1] - s[j];
    out.emplace_back(counts);
    std::size_t i = 1;
    while (i < k && s[i] == s[i + 1]) ++i;
    if (i >= k) break;
    ++s[i];
    for (std::size_t j = 1; j < i; ++j) s[j] = 0;
  }
  return out;
}

std::vector<ProbVector> simplex_lattice(std::size_t k, std::int64_t resolution, std::uint64_t cap) {
  if (resolution < 1) throw std::invalid_argument("simplex_lattice: resolution must be positive");
  std::vector<ProbVector> out;
  const double g = static_cast<double>(resolution);
  for (const CountVector& c : enumerate_grid(k, resolution, cap)) {
    std::vector<double> coords(k);
    for (std::size_t j = 0; j < k; ++j) coords[j] = static_cast<double>(c[j]) / g;
    out.emplace_back(std::move(coords));
  }
  return out;
}

ProbVector empirical_mean(std::span<const ProbVector> obs) {
  if (obs.empty()) throw std::invalid_argument("empirical_mean: empty observation sequence");
  const std::size_t k = obs.front().dim();
  std::vector<double> mean(k, 0.0);
  for (const ProbVector& y : obs) {
    if (y.dim() != k) throw std::invalid_argument("empirical_mean: dimension mismatch");
    for (std::size_t j = 0; j < k; ++j) mean[j] += y[j];
  }
  for (double& m : mean) m /= static_cast<double>(obs.size());
  return ProbVector(std::move(mean));
}

}  // namespace cseq

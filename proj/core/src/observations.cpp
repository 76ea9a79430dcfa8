#include "cseq/observations.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <string>

#include "cseq/reduce.hpp"

namespace cseq {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_number(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size() && !s.empty();
}

bool parse_fields(std::string_view line, std::vector<double>& out) {
  out.clear();
  while (true) {
    const auto comma = line.find(',');
    double v = 0.0;
    if (!parse_number(line.substr(0, comma), v)) return false;
    out.push_back(v);
    if (comma == std::string_view::npos) return true;
    line.remove_prefix(comma + 1);
  }
}

}  // namespace

std::vector<double> Observations::sums() const {
  std::vector<double> s(dim, 0.0);
  for (const auto& y : points) {
    for (std::size_t j = 0; j < dim; ++j) s[j] += y[j];
  }
  return s;
}

CountVector Observations::counts() const {
  if (!categorical) throw std::logic_error("counts() needs categorical observations");
  CountVector c = CountVector::zeros(dim);
  for (auto j : labels) c.increment(j);
  return c;
}

Observations read_observations(std::istream& in, bool box, std::size_t k_hint) {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> line_numbers;
  std::string line;
  std::vector<double> fields;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    if (!parse_fields(s, fields)) {
      if (rows.empty() && line_numbers.empty()) {
        line_numbers.push_back(0);  // header
        continue;
      }
      throw std::invalid_argument("observation line " + std::to_string(number) + ": cannot parse '" +
                                  std::string(s) + "'");
    }
    rows.push_back(fields);
    line_numbers.push_back(number);
  }
  if (!line_numbers.empty() && line_numbers.front() == 0) line_numbers.erase(line_numbers.begin());

  Observations obs;
  if (rows.empty()) {
    if (k_hint == 0) throw std::invalid_argument("observation file is empty and K is unknown");
    obs.dim = k_hint;
    return obs;
  }

  const std::size_t width = rows.front().size();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != width) {
      throw std::invalid_argument("observation line " + std::to_string(line_numbers[i]) + ": expected " +
                                  std::to_string(width) + " fields, got " + std::to_string(rows[i].size()));
    }
  }

  if (!box && width == 1) {
    obs.categorical = true;
    std::size_t max_label = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double v = rows[i][0];
      if (v != static_cast<double>(static_cast<std::int64_t>(v)) || v < 1) {
        throw std::invalid_argument("observation line " + std::to_string(line_numbers[i]) +
                                    ": category labels must be integers >= 1");
      }
      obs.labels.push_back(static_cast<std::size_t>(v) - 1);
      max_label = std::max(max_label, static_cast<std::size_t>(v));
    }
    if (k_hint != 0 && max_label > k_hint) {
      throw std::invalid_argument("category label " + std::to_string(max_label) + " exceeds K = " +
                                  std::to_string(k_hint));
    }
    obs.dim = k_hint != 0 ? k_hint : std::max<std::size_t>(max_label, 2);
    for (auto j : obs.labels) obs.points.push_back(ProbVector::vertex(obs.dim, j));
    return obs;
  }

  obs.dim = box ? width + 1 : width;
  if (k_hint != 0 && obs.dim != k_hint) {
    throw std::invalid_argument("observations have dimension " + std::to_string(obs.dim) + " but K = " +
                                std::to_string(k_hint));
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    try {
      obs.points.push_back(box ? embed(BoxObservation(rows[i])) : ProbVector(rows[i]));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("observation line " + std::to_string(line_numbers[i]) + ": " + e.what());
    }
  }
  return obs;
}

Observations read_observations_file(const std::string& path, bool box, std::size_t k_hint) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open observation file '" + path + "'");
  return read_observations(in, box, k_hint);
}

}  // namespace cseq

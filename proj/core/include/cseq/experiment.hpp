#pragma once

// Simulation harness: declarative experiment configs, per-trial runners for
// every confidence-set method, and the summaries behind the volume/coverage
// and stopping-time plots.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cseq/simplex.hpp"
#include "cseq/wor.hpp"

namespace cseq {

enum class Method {
  kKt,
  kUp,
  kKt2Mix,
  kKt2Bonf,
  kUp2Mix,
  kUp2Bonf,
  kSanov,
  kMardia,
  kCpBonf,
};

std::string_view to_string(Method method);
Method parse_method(std::string_view name);
bool time_uniform(Method method);
std::vector<Method> parse_methods(std::string_view csv);

enum class Preset { kFig1, kFig2, kFig3, kCustom };

std::string_view to_string(Preset preset);
Preset parse_preset(std::string_view name);

enum class DataKind { kCategorical, kDirichlet, kWithoutReplacement };

struct ExperimentConfig {
  Preset preset = Preset::kCustom;
  std::size_t k = 3;
  std::int64_t horizon = 100;
  std::int64_t trials = 100;
  double delta = 0.05;
  std::vector<double> mu;
  std::vector<double> conc;
  std::vector<std::int64_t> census;
  std::vector<Method> methods;
  std::vector<WorMethod> wor_methods;
  std::uint64_t seed = 0;
  std::int64_t grid = 0;  // 0 selects default_grid_resolution(k)
  double alpha = 0.5;
  unsigned threads = 1;
  std::string out;
  std::string json;
  std::string svg;

  DataKind data_kind() const;
  std::int64_t grid_resolution() const;
  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

/// Defaults for a preset; fields the preset does not fix keep their defaults.
ExperimentConfig preset_config(Preset preset, std::size_t k = 3);

/// Fills fields left empty (mu, methods, ...) from the preset, then validates.
ExperimentConfig resolve(ExperimentConfig config);

struct StepRecord {
  double volume = 1.0;
  bool covered = true;
  std::uint64_t active_count = 0;
};

struct MethodTrace {
  std::string method;
  bool time_uniform = true;
  std::vector<StepRecord> steps;        // t = 0..T
  std::optional<std::int64_t> stop_t;   // WoR only; N when never decided
};

struct TrialResult {
  std::int64_t trial = 0;
  std::vector<MethodTrace> traces;
};

struct MethodSummary {
  std::string method;
  bool time_uniform = true;
  std::vector<double> mean_volume;
  std::vector<double> coverage;          // per-step
  std::vector<double> uniform_coverage;  // truth active at every step up to t
  std::optional<double> mean_stop_t;
  std::vector<std::int64_t> stop_histogram;  // 20 equal-width bins over [0, N]
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialResult> trials;
  std::vector<MethodSummary> summary;
  std::optional<double> kt_ppr_ratio;            // mean stop (wor-kt) / mean stop (ppr)
  std::optional<double> mean_pairwise_ratio;     // mean over permutations of stop_kt / stop_ppr
  std::optional<double> kt_no_later_fraction;    // fraction of permutations with stop_kt <= stop_ppr
};

/// Runs one trial of a resolved config.
TrialResult run_trial(const ExperimentConfig& config, std::int64_t trial);

/// Runs every trial (in parallel when config.threads > 1) and summarizes.
/// Output is independent of the thread count.
ExperimentResult run_experiment(const ExperimentConfig& config);

std::vector<MethodSummary> summarize(const ExperimentConfig& config, const std::vector<TrialResult>& trials);

}  // namespace cseq

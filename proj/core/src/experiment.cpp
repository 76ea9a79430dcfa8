#include "cseq/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "cseq/baselines.hpp"
#include "cseq/confset.hpp"
#include "cseq/generators.hpp"
#include "cseq/wealth.hpp"

namespace cseq {

namespace {

struct MethodInfo {
  Method method;
  std::string_view name;
  bool time_uniform;
};

constexpr MethodInfo kMethods[] = {
    {Method::kKt, "kt", true},           {Method::kUp, "up", true},
    {Method::kKt2Mix, "kt2-mix", true},  {Method::kKt2Bonf, "kt2-bonf", true},
    {Method::kUp2Mix, "up2-mix", true},  {Method::kUp2Bonf, "up2-bonf", true},
    {Method::kSanov, "sanov", false},    {Method::kMardia, "mardia", false},
    {Method::kCpBonf, "cp-bonf", false},
};

const MethodInfo& info(Method method) {
  for (const auto& m : kMethods) {
    if (m.method == method) return m;
  }
  throw std::logic_error("unknown Method value");
}

std::vector<std::string_view> split(std::string_view csv) {
  std::vector<std::string_view> out;
  while (!csv.empty()) {
    const auto comma = csv.find(',');
    auto piece = csv.substr(0, comma);
    while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
    while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
    if (!piece.empty()) out.push_back(piece);
    if (comma == std::string_view::npos) break;
    csv.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

std::string_view to_string(Method method) { return info(method).name; }

bool time_uniform(Method method) { return info(method).time_uniform; }

Method parse_method(std::string_view name) {
  for (const auto& m : kMethods) {
    if (m.name == name) return m.method;
  }
  std::string known;
  for (const auto& m : kMethods) known += (known.empty() ? "" : ", ") + std::string(m.name);
  throw std::invalid_argument("unknown method '" + std::string(name) + "' (known: " + known + ")");
}

std::vector<Method> parse_methods(std::string_view csv) {
  std::vector<Method> out;
  for (auto name : split(csv)) out.push_back(parse_method(name));
  return out;
}

std::string_view to_string(Preset preset) {
  switch (preset) {
    case Preset::kFig1:
      return "fig1";
    case Preset::kFig2:
      return "fig2";
    case Preset::kFig3:
      return "fig3";
    case Preset::kCustom:
      return "custom";
  }
  return "?";
}

Preset parse_preset(std::string_view name) {
  if (name == "fig1") return Preset::kFig1;
  if (name == "fig2") return Preset::kFig2;
  if (name == "fig3") return Preset::kFig3;
  if (name == "custom") return Preset::kCustom;
  throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected fig1, fig2, fig3, custom)");
}

DataKind ExperimentConfig::data_kind() const {
  if (!census.empty()) return DataKind::kWithoutReplacement;
  if (!conc.empty()) return DataKind::kDirichlet;
  return DataKind::kCategorical;
}

std::int64_t ExperimentConfig::grid_resolution() const { return grid > 0 ? grid : default_grid_resolution(k); }

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("invalid experiment config: " + what); };
  if (!(delta > 0.0 && delta < 1.0)) fail("delta must lie in (0,1)");
  if (trials < 1) fail("trials must be at least 1");
  if (horizon < 0) fail("horizon must be nonnegative");
  if (k < 2) fail("k must be at least 2");
  if (!(alpha > 0.0)) fail("alpha must be positive");
  if (threads < 1) fail("threads must be at least 1");
  if (grid < 0) fail("grid must be positive (or 0 for the default)");
  if (!mu.empty() + !conc.empty() + !census.empty() > 1) fail("give exactly one of mu, conc, census");

  switch (data_kind()) {
    case DataKind::kWithoutReplacement: {
      if (census.size() != k) fail("census has " + std::to_string(census.size()) + " entries but k = " + std::to_string(k));
      std::int64_t n = 0;
      for (auto c : census) {
        if (c < 0) fail("census entries must be nonnegative");
        n += c;
      }
      if (n < 2) fail("census must describe a population of at least 2");
      if (wor_methods.empty()) fail("no without-replacement methods selected");
      check_grid_cap(k, n, kDefaultGridCap);
      return;
    }
    case DataKind::kDirichlet:
      if (conc.size() != k) fail("conc has " + std::to_string(conc.size()) + " entries but k = " + std::to_string(k));
      for (double a : conc) {
        if (!(a > 0.0)) fail("conc entries must be positive");
      }
      break;
    case DataKind::kCategorical:
      if (mu.size() != k) {
        fail(mu.empty() ? "mu is required for categorical data"
                        : "mu has " + std::to_string(mu.size()) + " entries but k = " + std::to_string(k));
      }
      ProbVector{mu};
      break;
  }
  if (methods.empty()) fail("no methods selected");
  check_grid_cap(k, grid_resolution(), kDefaultGridCap);
  for (Method m : methods) {
    if (m == Method::kCpBonf && data_kind() != DataKind::kCategorical) fail("cp-bonf requires categorical data");
    if (m == Method::kUp) check_grid_cap(k, horizon, kDefaultGridCap);
  }
}

ExperimentConfig preset_config(Preset preset, std::size_t k) {
  ExperimentConfig c;
  c.preset = preset;
  c.k = k;
  switch (preset) {
    case Preset::kFig1:
      c.horizon = 100;
      c.trials = 100;
      c.delta = 0.05;
      if (k == 3) c.mu = {0.6, 0.25, 0.15};
      if (k == 4) c.mu = {0.4, 0.3, 0.2, 0.1};
      if (k == 5) c.mu = {0.3, 0.25, 0.2, 0.15, 0.1};
      break;
    case Preset::kFig2:
      c.k = 3;
      c.census = {600, 250, 150};
      c.trials = 1000;
      c.delta = 0.05;
      break;
    case Preset::kFig3:
      c.horizon = 100;
      c.trials = 100;
      c.delta = 0.05;
      break;
    case Preset::kCustom:
      break;
  }
  return c;
}

ExperimentConfig resolve(ExperimentConfig c) {
  if (c.preset == Preset::kFig3 && c.conc.empty()) {
    throw std::invalid_argument("preset fig3 requires --conc (Dirichlet concentration)");
  }
  switch (c.data_kind()) {
    case DataKind::kWithoutReplacement: {
      c.k = c.census.size();
      std::int64_t n = 0;
      for (auto v : c.census) n += v;
      c.horizon = n - 1;
      if (c.wor_methods.empty()) c.wor_methods = {WorMethod::kWorKt, WorMethod::kPpr};
      c.methods.clear();
      break;
    }
    case DataKind::kDirichlet:
      if (c.methods.empty()) c.methods = {Method::kUp, Method::kUp2Mix, Method::kUp2Bonf, Method::kKt};
      break;
    case DataKind::kCategorical:
      if (c.methods.empty()) {
        c.methods = {Method::kKt, Method::kKt2Mix, Method::kKt2Bonf, Method::kSanov, Method::kMardia, Method::kCpBonf};
      }
      break;
  }
  c.validate();
  return c;
}

namespace {

struct Context {
  const ExperimentConfig& config;
  CandidateGrid grid;
  std::vector<std::int32_t> lattice;  // integer coordinates, K per candidate
  std::int64_t resolution = 0;
  ProbVector truth;
  DirichletPrior prior;
  DirichletPrior binary_prior;
  double log_threshold;

  explicit Context(const ExperimentConfig& c)
      : config(c),
        resolution(c.grid_resolution()),
        truth(make_truth(c)),
        prior(DirichletPrior::symmetric(c.k, c.alpha)),
        binary_prior(DirichletPrior::symmetric(2, c.alpha)),
        log_threshold(log_inverse_delta(c.delta)) {
    const auto counts = enumerate_grid(c.k, resolution);
    std::vector<ProbVector> cands;
    cands.reserve(counts.size());
    lattice.reserve(counts.size() * c.k);
    const double g = static_cast<double>(resolution);
    for (const CountVector& v : counts) {
      std::vector<double> coords(c.k);
      for (std::size_t j = 0; j < c.k; ++j) {
        coords[j] = static_cast<double>(v[j]) / g;
        lattice.push_back(static_cast<std::int32_t>(v[j]));
      }
      cands.emplace_back(std::move(coords));
    }
    grid = make_candidate_grid(std::move(cands));
  }

  static ProbVector make_truth(const ExperimentConfig& c) {
    if (c.data_kind() == DataKind::kDirichlet) {
      std::vector<double> m(c.conc);
      double s = 0.0;
      for (double a : m) s += a;
      for (double& a : m) a /= s;
      return ProbVector(std::move(m));
    }
    return ProbVector(c.mu);
  }
};

struct Stream {
  std::vector<ProbVector> obs;
  std::vector<std::size_t> labels;  // categorical only
};

Stream make_stream(const Context& ctx, std::mt19937_64& rng) {
  Stream s;
  const auto& c = ctx.config;
  if (c.data_kind() == DataKind::kDirichlet) {
    s.obs = gen_dirichlet(c.conc, c.horizon, rng);
  } else {
    s.labels = gen_categorical(ctx.truth, c.horizon, rng);
    s.obs.reserve(s.labels.size());
    for (auto j : s.labels) s.obs.push_back(ProbVector::vertex(c.k, j));
  }
  return s;
}

// Running-intersection trace. step(t, set) folds round t into the set and
// returns the log-wealth (or aggregate score) at the truth.
template <class StepFn>
MethodTrace uniform_trace(const Context& ctx, Method method, std::int64_t horizon, StepFn&& step) {
  MethodTrace trace{std::string(to_string(method)), true, {}, std::nullopt};
  trace.steps.reserve(static_cast<std::size_t>(horizon) + 1);
  ConfidenceSet set(ctx.grid, ctx.config.delta);
  trace.steps.push_back({1.0, true, set.size()});
  double truth_max = 0.0;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    truth_max = std::max(truth_max, step(t, set));
    trace.steps.push_back({relative_volume(set), truth_max < ctx.log_threshold, set.active_count()});
  }
  return trace;
}

// Per-step (non-intersected) trace; member(t, i) and truth_in(t) describe the set at t.
template <class Member, class Truth, class Advance>
MethodTrace pointwise_trace(const Context& ctx, Method method, std::int64_t horizon, Advance&& advance,
                            Member&& member, Truth&& truth_in) {
  MethodTrace trace{std::string(to_string(method)), false, {}, std::nullopt};
  const std::size_t n = ctx.grid->size();
  trace.steps.reserve(static_cast<std::size_t>(horizon) + 1);
  trace.steps.push_back({1.0, true, n});
  for (std::int64_t t = 1; t <= horizon; ++t) {
    advance(t);
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < n; ++i) count += member(i) ? 1 : 0;
    trace.steps.push_back({static_cast<double>(count) / static_cast<double>(n), truth_in(), count});
  }
  return trace;
}

MethodTrace run_method(const Context& ctx, Method method, const Stream& stream) {
  const auto& c = ctx.config;
  const std::size_t k = c.k;
  const auto horizon = static_cast<std::int64_t>(stream.obs.size());
  const auto& cands = *ctx.grid;
  const std::size_t g1 = static_cast<std::size_t>(ctx.resolution) + 1;
  const double g = static_cast<double>(ctx.resolution);
  std::vector<double> counts(k, 0.0);
  auto absorb_counts = [&](std::int64_t t) {
    const ProbVector& y = stream.obs[static_cast<std::size_t>(t - 1)];
    for (std::size_t j = 0; j < k; ++j) counts[j] += y[j];
  };

  // Aggregated coordinate sets: per-coordinate log-wealth cached over the G+1
  // lattice values of m_j, then combined per candidate.
  auto aggregate = [&](auto&& fill_cache, auto&& truth_wealths, bool mixture) {
    std::vector<double> cache(k * g1);
    std::vector<double> w(k);
    return uniform_trace(ctx, method, horizon, [&](std::int64_t t, ConfidenceSet& set) {
      fill_cache(t, cache);
      set.update_indexed([&](std::size_t i) {
        for (std::size_t j = 0; j < k; ++j) w[j] = cache[j * g1 + static_cast<std::size_t>(ctx.lattice[i * k + j])];
        CoordinateWealths cw(w);
        return mixture ? cw.mixture_score() : cw.bonferroni_score();
      });
      CoordinateWealths truth(truth_wealths());
      return mixture ? truth.mixture_score() : truth.bonferroni_score();
    });
  };

  switch (method) {
    case Method::kKt:
      return uniform_trace(ctx, method, horizon, [&](std::int64_t t, ConfidenceSet& set) {
        absorb_counts(t);
        set.update([&](const ProbVector& m) { return kt_log_wealth(counts, m, ctx.prior); });
        return kt_log_wealth(counts, ctx.truth, ctx.prior).value();
      });

    case Method::kUp: {
      UpState state(k, ctx.prior);
      return uniform_trace(ctx, method, horizon, [&](std::int64_t t, ConfidenceSet& set) {
        state.absorb(stream.obs[static_cast<std::size_t>(t - 1)]);
        UpWealthEvaluator eval(state);
        set.update(eval);
        return eval(ctx.truth).value();
      });
    }

    case Method::kKt2Mix:
    case Method::kKt2Bonf: {
      auto fill = [&](std::int64_t t, std::vector<double>& cache) {
        absorb_counts(t);
        const double td = static_cast<double>(t);
        for (std::size_t j = 0; j < k; ++j) {
          for (std::size_t v = 0; v < g1; ++v) {
            cache[j * g1 + v] = kt2_log_wealth(counts[j], td, static_cast<double>(v) / g, ctx.binary_prior).value();
          }
        }
      };
      auto truth = [&] {
        const auto w = CoordinateWealths::kt2(counts, ctx.truth, ctx.binary_prior).log_wealths();
        return std::vector<double>(w.begin(), w.end());
      };
      return aggregate(fill, truth, method == Method::kKt2Mix);
    }

    case Method::kUp2Mix:
    case Method::kUp2Bonf: {
      std::vector<UpState> states(k, UpState(2, ctx.binary_prior));
      std::vector<double> truth_w(k);
      auto fill = [&](std::int64_t t, std::vector<double>& cache) {
        const ProbVector& y = stream.obs[static_cast<std::size_t>(t - 1)];
        for (std::size_t j = 0; j < k; ++j) {
          states[j].absorb(ProbVector({y[j], 1.0 - y[j]}, 1e-6));
          UpWealthEvaluator eval(states[j]);
          for (std::size_t v = 0; v < g1; ++v) {
            const double p = static_cast<double>(v) / g;
            cache[j * g1 + v] = eval(ProbVector({p, 1.0 - p}, 1e-6)).value();
          }
          truth_w[j] = eval(ProbVector({ctx.truth[j], 1.0 - ctx.truth[j]}, 1e-6)).value();
        }
      };
      return aggregate(fill, [&] { return truth_w; }, method == Method::kUp2Mix);
    }

    case Method::kSanov:
    case Method::kMardia: {
      std::vector<double> mu_hat(k);
      std::optional<double> radius;
      auto advance = [&](std::int64_t t) {
        absorb_counts(t);
        for (std::size_t j = 0; j < k; ++j) mu_hat[j] = counts[j] / static_cast<double>(t);
        radius = method == Method::kSanov ? std::optional<double>(sanov_radius(t, k, c.delta))
                                          : mardia_radius(t, k, c.delta);
      };
      // Before the Mardia bound applies the set is the whole simplex.
      auto in = [&](const ProbVector& m) { return !radius || kl_divergence(mu_hat, m.coords()) < *radius; };
      return pointwise_trace(
          ctx, method, horizon, advance, [&](std::size_t i) { return in(cands[i]); },
          [&] { return in(ctx.truth); });
    }

    case Method::kCpBonf: {
      std::vector<std::int64_t> int_counts(k, 0);
      std::vector<Interval> box;
      auto advance = [&](std::int64_t t) {
        ++int_counts[stream.labels[static_cast<std::size_t>(t - 1)]];
        box = cp_bonferroni_box(CountVector(int_counts), c.delta);
      };
      return pointwise_trace(
          ctx, method, horizon, advance, [&](std::size_t i) { return in_box(box, cands[i]); },
          [&] { return in_box(box, ctx.truth); });
    }
  }
  throw std::logic_error("unhandled method");
}

TrialResult run_wor_trial(const ExperimentConfig& c, std::int64_t trial) {
  auto rng = trial_stream(c.seed, static_cast<std::uint64_t>(trial));
  const CountVector census(c.census);
  const auto draws = gen_wor(census, rng);
  const std::int64_t n = census.total();
  const auto prior = DirichletPrior::symmetric(c.k, c.alpha);

  TrialResult result;
  result.trial = trial;
  for (WorMethod method : c.wor_methods) {
    MethodTrace trace{std::string(to_string(method)), true, {}, std::nullopt};
    AuditState state(n, c.k, method, c.delta, prior);
    trace.steps.reserve(static_cast<std::size_t>(n));
    trace.steps.push_back({1.0, true, state.active_count()});
    bool covered = true;
    for (std::int64_t t = 1; t < n; ++t) {
      state.absorb(draws[static_cast<std::size_t>(t - 1)]);
      covered = covered && state.is_active(census);
      trace.steps.push_back({state.relative_volume(), covered, state.active_count()});
      if (!trace.stop_t && state.rank_decided()) trace.stop_t = t;
    }
    if (!trace.stop_t) trace.stop_t = n;
    result.traces.push_back(std::move(trace));
  }
  return result;
}

TrialResult run_trial_in(const Context& ctx, std::int64_t trial) {
  auto rng = trial_stream(ctx.config.seed, static_cast<std::uint64_t>(trial));
  const Stream stream = make_stream(ctx, rng);
  TrialResult result;
  result.trial = trial;
  for (Method m : ctx.config.methods) result.traces.push_back(run_method(ctx, m, stream));
  return result;
}

}  // namespace

TrialResult run_trial(const ExperimentConfig& config, std::int64_t trial) {
  if (config.data_kind() == DataKind::kWithoutReplacement) return run_wor_trial(config, trial);
  Context ctx(config);
  return run_trial_in(ctx, trial);
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.trials.resize(static_cast<std::size_t>(config.trials));

  std::optional<Context> ctx;
  if (config.data_kind() != DataKind::kWithoutReplacement) ctx.emplace(config);
  auto one = [&](std::int64_t i) {
    result.trials[static_cast<std::size_t>(i)] = ctx ? run_trial_in(*ctx, i) : run_wor_trial(config, i);
  };

  const unsigned workers = std::min<unsigned>(config.threads, static_cast<unsigned>(config.trials));
  if (workers <= 1) {
    for (std::int64_t i = 0; i < config.trials; ++i) one(i);
  } else {
    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::int64_t i = next++; i < config.trials; i = next++) {
          try {
            one(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
  }

  result.summary = summarize(config, result.trials);
  const MethodSummary* kt = nullptr;
  const MethodSummary* ppr = nullptr;
  std::size_t kt_pos = 0;
  std::size_t ppr_pos = 0;
  for (std::size_t i = 0; i < result.summary.size(); ++i) {
    if (result.summary[i].method == to_string(WorMethod::kWorKt)) kt = &result.summary[i], kt_pos = i;
    if (result.summary[i].method == to_string(WorMethod::kPpr)) ppr = &result.summary[i], ppr_pos = i;
  }
  if (kt && ppr && kt->mean_stop_t && ppr->mean_stop_t) {
    result.kt_ppr_ratio = *kt->mean_stop_t / *ppr->mean_stop_t;
    double ratio_sum = 0.0;
    std::int64_t no_later = 0;
    for (const auto& tr : result.trials) {
      const auto a = *tr.traces[kt_pos].stop_t;
      const auto b = *tr.traces[ppr_pos].stop_t;
      ratio_sum += static_cast<double>(a) / static_cast<double>(b);
      no_later += a <= b ? 1 : 0;
    }
    const auto r = static_cast<double>(result.trials.size());
    result.mean_pairwise_ratio = ratio_sum / r;
    result.kt_no_later_fraction = static_cast<double>(no_later) / r;
  }
  return result;
}

std::vector<MethodSummary> summarize(const ExperimentConfig& config, const std::vector<TrialResult>& trials) {
  std::vector<MethodSummary> out;
  if (trials.empty()) return out;
  const std::size_t methods = trials.front().traces.size();
  const auto r = static_cast<double>(trials.size());
  std::int64_t population = 0;
  for (auto v : config.census) population += v;

  for (std::size_t mi = 0; mi < methods; ++mi) {
    MethodSummary s;
    s.method = trials.front().traces[mi].method;
    s.time_uniform = trials.front().traces[mi].time_uniform;
    const std::size_t steps = trials.front().traces[mi].steps.size();
    s.mean_volume.assign(steps, 0.0);
    s.coverage.assign(steps, 0.0);
    s.uniform_coverage.assign(steps, 0.0);
    double stop_sum = 0.0;
    bool has_stop = false;
    if (population > 0) s.stop_histogram.assign(20, 0);
    for (const auto& tr : trials) {
      const auto& trace = tr.traces[mi];
      bool always = true;
      for (std::size_t t = 0; t < steps; ++t) {
        s.mean_volume[t] += trace.steps[t].volume;
        s.coverage[t] += trace.steps[t].covered ? 1.0 : 0.0;
        always = always && trace.steps[t].covered;
        s.uniform_coverage[t] += always ? 1.0 : 0.0;
      }
      if (trace.stop_t) {
        has_stop = true;
        stop_sum += static_cast<double>(*trace.stop_t);
        const auto bin = std::min<std::int64_t>(19, *trace.stop_t * 20 / std::max<std::int64_t>(population, 1));
        if (!s.stop_histogram.empty()) ++s.stop_histogram[static_cast<std::size_t>(bin)];
      }
    }
    for (std::size_t t = 0; t < steps; ++t) {
      s.mean_volume[t] /= r;
      s.coverage[t] /= r;
      s.uniform_coverage[t] /= r;
    }
    if (has_stop) s.mean_stop_t = stop_sum / r;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace cseq

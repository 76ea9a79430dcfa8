#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cseq/confset.hpp"
#include "cseq/emit.hpp"
#include "cseq/experiment.hpp"
#include "cseq/observations.hpp"
#include "cseq/reduce.hpp"
#include "cseq/wealth.hpp"
#include "cseq/wor.hpp"

namespace {

using namespace cseq;

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      if constexpr (std::is_integral_v<T>) {
        out.push_back(static_cast<T>(std::stoll(item, &used)));
      } else {
        out.push_back(static_cast<T>(std::stod(item, &used)));
      }
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("cannot parse ") + what + " entry '" + item + "'");
    }
  }
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_outputs(const ExperimentResult& result, const ExperimentConfig& c) {
  if (!c.out.empty()) emit(result, OutputFormat::kCsv, c.out);
  if (!c.json.empty()) emit(result, OutputFormat::kJson, c.json);
  if (!c.svg.empty()) emit(result, OutputFormat::kSvg, c.svg);
}

void print_summary(const ExperimentResult& result) {
  std::printf("%-10s %-12s %12s %12s %12s\n", "method", "time_unif", "final_vol", "final_cov", "unif_cov");
  for (const auto& s : result.summary) {
    std::printf("%-10s %-12s %12.6f %12.4f %12.4f", s.method.c_str(), s.time_uniform ? "yes" : "no",
                s.mean_volume.back(), s.coverage.back(), s.uniform_coverage.back());
    if (s.mean_stop_t) std::printf("   mean_stop_t %.2f", *s.mean_stop_t);
    std::printf("\n");
  }
  if (result.kt_ppr_ratio) {
    std::printf("stop-time ratio wor-kt/ppr (ratio of means) %.4f\n", *result.kt_ppr_ratio);
    std::printf("mean per-permutation ratio %.4f\n", *result.mean_pairwise_ratio);
    std::printf("fraction with wor-kt deciding no later than ppr %.4f\n", *result.kt_no_later_fraction);
  }
}

struct SimulateArgs {
  std::string preset = "fig1";
  std::string config;
  std::optional<std::size_t> k;
  std::string mu;
  std::string conc;
  std::optional<std::int64_t> horizon;
  std::optional<std::int64_t> trials;
  std::optional<double> delta;
  std::optional<std::uint64_t> seed;
  std::string methods;
  std::optional<std::int64_t> grid;
  std::optional<double> alpha;
  std::optional<unsigned> threads;
  std::string out;
  std::string json;
  std::string svg;
};

void apply_common(ExperimentConfig& c, const SimulateArgs& a) {
  if (a.trials) c.trials = *a.trials;
  if (a.delta) c.delta = *a.delta;
  if (a.seed) c.seed = *a.seed;
  if (a.alpha) c.alpha = *a.alpha;
  if (a.threads) c.threads = *a.threads;
  if (!a.out.empty()) c.out = a.out;
  if (!a.json.empty()) c.json = a.json;
  if (!a.svg.empty()) c.svg = a.svg;
}

int run_simulate(const SimulateArgs& a) {
  ExperimentConfig c;
  if (!a.config.empty()) {
    c = config_from_json(slurp(a.config));
  } else {
    c = preset_config(parse_preset(a.preset), a.k.value_or(3));
  }
  if (a.k) c.k = *a.k;
  if (!a.mu.empty()) {
    c.mu = parse_list<double>(a.mu, "--mu");
    c.conc.clear();
    c.census.clear();
    if (!a.k) c.k = c.mu.size();
  }
  if (!a.conc.empty()) {
    c.conc = parse_list<double>(a.conc, "--conc");
    c.mu.clear();
    c.census.clear();
    if (!a.k) c.k = c.conc.size();
  }
  if (a.horizon) c.horizon = *a.horizon;
  if (a.grid) c.grid = *a.grid;
  if (!a.methods.empty()) c.methods = parse_methods(a.methods);
  apply_common(c, a);
  c = resolve(c);
  const auto result = run_experiment(c);
  write_outputs(result, c);
  print_summary(result);
  return 0;
}

struct WorArgs {
  SimulateArgs common;
  std::string census = "600,250,150";
  std::string method = "wor-kt,ppr";
  bool stream = false;
  std::optional<std::int64_t> population;
  std::optional<std::size_t> k;
  std::string input;
};

int run_wor_stream(const WorArgs& a) {
  if (!a.population || !a.k) throw std::invalid_argument("--stream needs --population and --k");
  const WorMethod method = parse_wor_method(a.method);
  const double delta = a.common.delta.value_or(0.05);
  AuditState state(*a.population, *a.k, method, delta,
                   DirichletPrior::symmetric(*a.k, a.common.alpha.value_or(0.5)));
  std::ifstream file;
  if (!a.input.empty()) {
    file.open(a.input);
    if (!file) throw std::runtime_error("cannot open '" + a.input + "'");
  }
  std::istream& in = a.input.empty() ? std::cin : file;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t\r")] == '#') continue;
    const auto label = parse_list<std::int64_t>(line, "category");
    if (label.size() != 1 || label[0] < 1 || label[0] > static_cast<std::int64_t>(*a.k)) {
      throw std::invalid_argument("expected one category label in 1.." + std::to_string(*a.k) + ", got '" + line + "'");
    }
    state.absorb(static_cast<std::size_t>(label[0] - 1));
    nlohmann::json out = {{"t", state.t()}, {"active_count", state.active_count()}};
    if (state.active_count() == 0) {
      out["bounds"] = nullptr;
      out["decided"] = false;
      out["error"] = "every census has been excluded";
      std::cout << out.dump() << std::endl;
      return 3;
    }
    nlohmann::json bounds = nlohmann::json::array();
    for (const auto& b : state.category_count_bounds()) bounds.push_back({b.lower, b.upper});
    out["bounds"] = bounds;
    out["decided"] = state.rank_decided();
    std::cout << out.dump() << std::endl;
  }
  return 0;
}

int run_wor(const WorArgs& a) {
  if (a.stream) return run_wor_stream(a);
  ExperimentConfig c = preset_config(Preset::kFig2);
  c.census = parse_list<std::int64_t>(a.census, "--census");
  c.k = c.census.size();
  c.wor_methods.clear();
  std::stringstream ss(a.method);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) c.wor_methods.push_back(parse_wor_method(item));
  }
  apply_common(c, a.common);
  c = resolve(c);
  const auto result = run_experiment(c);
  write_outputs(result, c);
  print_summary(result);
  return 0;
}

struct WealthArgs {
  std::string method = "kt";
  std::string obs;
  std::string m;
  std::string census;
  double alpha = 0.5;
  std::optional<std::int64_t> population;
  bool box = false;
};

int run_wealth(const WealthArgs& a) {
  if (a.m.empty() && a.census.empty()) throw std::invalid_argument("give --m (or --census for WoR methods)");
  std::optional<ProbVector> m;
  std::optional<CountVector> census;
  std::size_t k = 0;
  if (!a.census.empty()) {
    census = CountVector(parse_list<std::int64_t>(a.census, "--census"));
    k = census->dim();
  } else {
    if (a.box) {
      m = embed(BoxObservation(parse_list<double>(a.m, "--m")));
    } else {
      m = ProbVector::parse(a.m);
    }
    k = m->dim();
  }
  const Observations obs = read_observations_file(a.obs, a.box, k);
  const auto prior = DirichletPrior::symmetric(k, a.alpha);

  LogValue w = LogValue::unit_wealth();
  if (a.method == "kt") {
    if (!m) throw std::invalid_argument("kt needs --m");
    w = kt_log_wealth(obs.sums(), *m, prior);
  } else if (a.method == "up") {
    if (!m) throw std::invalid_argument("up needs --m");
    UpState state(k, prior);
    for (const auto& y : obs.points) state.absorb(y);
    w = UpWealthEvaluator(state)(*m);
  } else {
    if (!obs.categorical) throw std::invalid_argument(a.method + " needs categorical observations");
    std::int64_t n = 0;
    if (census) {
      n = census->total();
    } else {
      if (!a.population) throw std::invalid_argument(a.method + " needs --population (or --census)");
      n = *a.population;
    }
    if (!census) census = census_from_mean(*m, n);
    const ProbVector mean = [&] {
      std::vector<double> v(k);
      for (std::size_t j = 0; j < k; ++j) v[j] = static_cast<double>((*census)[j]) / static_cast<double>(n);
      return ProbVector(v);
    }();
    const WorMethod method = parse_wor_method(a.method);
    switch (method) {
      case WorMethod::kWorKt:
        w = wor_kt_log_wealth(obs.counts(), mean, n, prior);
        break;
      case WorMethod::kPpr:
        w = ppr_log_wealth(obs.counts(), *census, prior);
        break;
      case WorMethod::kPerRound:
        w = perround_wor_log_wealth(obs.points, mean, n, prior);
        break;
    }
  }
  std::cout << format_double(w.value()) << '\n';
  return 0;
}

struct ConfsetArgs {
  std::string method = "kt";
  std::string obs;
  double delta = 0.05;
  std::optional<std::int64_t> grid;
  std::optional<std::size_t> k;
  double alpha = 0.5;
  std::string out;
  bool box = false;
  std::size_t boundary = 0;
  std::string boundary_out;
};

int run_confset(const ConfsetArgs& a) {
  const Observations obs = read_observations_file(a.obs, a.box, a.k.value_or(0));
  const std::size_t k = obs.dim;
  const auto prior = DirichletPrior::symmetric(k, a.alpha);
  const std::int64_t g = a.grid.value_or(default_grid_resolution(k));
  const CandidateGrid grid = make_candidate_grid(a.box ? embedded_box_grid(k - 1, g) : simplex_lattice(k, g));
  ConfidenceSet set(grid, a.delta);

  std::vector<double> counts(k, 0.0);
  std::optional<UpState> up;
  if (a.method == "up") {
    up.emplace(k, prior);
  } else if (a.method != "kt") {
    throw std::invalid_argument("confset --method must be kt or up");
  }
  for (const auto& y : obs.points) {
    if (up) {
      up->absorb(y);
      set.update(UpWealthEvaluator(*up));
    } else {
      for (std::size_t j = 0; j < k; ++j) counts[j] += y[j];
      set.update([&](const ProbVector& m) { return kt_log_wealth(counts, m, prior); });
    }
  }

  if (!a.out.empty()) {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + a.out + "' for writing");
    if (a.box) {
      for (std::size_t j = 0; j + 1 < k; ++j) out << 'y' << (j + 1) << ',';
      out << "running_max_log_wealth,active\n";
      for (std::size_t i = 0; i < set.size(); ++i) {
        const auto yb = project(set.candidates()[i]);
        for (std::size_t j = 0; j < yb.dim(); ++j) out << format_double(yb[j]) << ',';
        out << format_double(set.running_max(i).value()) << ',' << (set.is_active(i) ? 1 : 0) << '\n';
      }
    } else {
      set.write_csv(out);
    }
  }

  std::printf("t=%zu active=%zu/%zu relative_volume=%.6f\n", obs.points.size(), set.active_count(), set.size(),
              relative_volume(set));

  if (a.boundary > 0) {
    if (k != 3 || a.box || obs.points.empty()) {
      throw std::invalid_argument("--boundary needs K = 3 simplex observations and at least one row");
    }
    const ProbVector center = empirical_mean(obs.points);
    std::vector<ProbVector> pts;
    if (up) {
      pts = refine_boundary(UpWealthEvaluator(*up), center, a.delta, a.boundary);
    } else {
      pts = refine_boundary([&](const ProbVector& m) { return kt_log_wealth(counts, m, prior); }, center, a.delta,
                            a.boundary);
    }
    std::ofstream file;
    if (!a.boundary_out.empty()) {
      file.open(a.boundary_out, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open '" + a.boundary_out + "' for writing");
    }
    std::ostream& os = a.boundary_out.empty() ? std::cout : file;
    os << "m1,m2,m3\n";
    for (const auto& p : pts) os << format_double(p[0]) << ',' << format_double(p[1]) << ',' << format_double(p[2]) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anytime-valid confidence sequences from gambling wealth"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo volume/coverage experiment");
  simulate->add_option("--preset", sim.preset, "fig1 | fig3 | custom")->check(CLI::IsMember({"fig1", "fig3", "custom"}));
  simulate->add_option("--config", sim.config, "JSON config; flags override its fields");
  simulate->add_option("--k", sim.k, "number of categories K");
  simulate->add_option("--mu", sim.mu, "categorical mean, comma-separated");
  simulate->add_option("--conc", sim.conc, "Dirichlet concentration, comma-separated");
  simulate->add_option("--t", sim.horizon, "horizon T");
  simulate->add_option("--trials", sim.trials, "number of trials R");
  simulate->add_option("--delta", sim.delta, "miscoverage level");
  simulate->add_option("--seed", sim.seed, "64-bit seed");
  simulate->add_option("--methods", sim.methods, "comma list: kt,up,kt2-mix,kt2-bonf,up2-mix,up2-bonf,sanov,mardia,cp-bonf");
  simulate->add_option("--grid", sim.grid, "candidate lattice resolution G");
  simulate->add_option("--alpha", sim.alpha, "symmetric Dirichlet prior parameter");
  simulate->add_option("--threads", sim.threads, "worker threads");
  simulate->add_option("--out", sim.out, "CSV output path");
  simulate->add_option("--json", sim.json, "JSON output path");
  simulate->add_option("--svg", sim.svg, "SVG plot path");

  WorArgs wor;
  auto* wor_cmd = app.add_subcommand("wor", "Sampling without replacement: stopping times or stream replay");
  wor_cmd->add_option("--census", wor.census, "population counts, comma-separated");
  wor_cmd->add_option("--permutations", wor.common.trials, "number of random draw orders");
  wor_cmd->add_option("--delta", wor.common.delta, "miscoverage level");
  wor_cmd->add_option("--method", wor.method, "wor-kt | ppr | perround (comma list outside --stream)");
  wor_cmd->add_option("--seed", wor.common.seed, "64-bit seed");
  wor_cmd->add_option("--alpha", wor.common.alpha, "symmetric Dirichlet prior parameter");
  wor_cmd->add_option("--threads", wor.common.threads, "worker threads");
  wor_cmd->add_option("--out", wor.common.out, "CSV output path");
  wor_cmd->add_option("--json", wor.common.json, "JSON output path");
  wor_cmd->add_option("--svg", wor.common.svg, "SVG plot path");
  wor_cmd->add_flag("--stream", wor.stream, "read 1-based labels line by line and emit JSON lines");
  wor_cmd->add_option("--population", wor.population, "population size N (stream mode)");
  wor_cmd->add_option("--k", wor.k, "number of categories (stream mode)");
  wor_cmd->add_option("--input", wor.input, "label file for stream mode (default stdin)");

  WealthArgs wealth;
  auto* wealth_cmd = app.add_subcommand("wealth", "Print the log-wealth at one candidate");
  wealth_cmd->add_option("--method", wealth.method, "kt | up | ppr | wor-kt | perround")
      ->check(CLI::IsMember({"kt", "up", "ppr", "wor-kt", "perround"}));
  wealth_cmd->add_option("--obs", wealth.obs, "observation CSV")->required();
  wealth_cmd->add_option("--m", wealth.m, "candidate mean, comma-separated");
  wealth_cmd->add_option("--census", wealth.census, "candidate census (WoR methods)");
  wealth_cmd->add_option("--alpha", wealth.alpha, "symmetric Dirichlet prior parameter");
  wealth_cmd->add_option("--population", wealth.population, "population size N (WoR methods)");
  wealth_cmd->add_flag("--box", wealth.box, "observations and --m are [0,1]^(K-1) box points");

  ConfsetArgs cs;
  auto* confset_cmd = app.add_subcommand("confset", "Realize the confidence set on a candidate lattice");
  confset_cmd->add_option("--method", cs.method, "kt | up")->check(CLI::IsMember({"kt", "up"}));
  confset_cmd->add_option("--obs", cs.obs, "observation CSV")->required();
  confset_cmd->add_option("--delta", cs.delta, "miscoverage level");
  confset_cmd->add_option("--grid", cs.grid, "lattice resolution G");
  confset_cmd->add_option("--k", cs.k, "number of categories (categorical files)");
  confset_cmd->add_option("--alpha", cs.alpha, "symmetric Dirichlet prior parameter");
  confset_cmd->add_option("--out", cs.out, "CSV of candidates with running max log-wealth and active flag");
  confset_cmd->add_flag("--box", cs.box, "observations are [0,1]^(K-1) box points");
  confset_cmd->add_option("--boundary", cs.boundary, "K = 3: number of rays for boundary refinement");
  confset_cmd->add_option("--boundary-out", cs.boundary_out, "boundary CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return run_simulate(sim);
    if (*wor_cmd) return run_wor(wor);
    if (*wealth_cmd) return run_wealth(wealth);
    if (*confset_cmd) return run_confset(cs);
  } catch (const std::exception& e) {
    std::cerr << "cseq: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

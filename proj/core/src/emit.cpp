#include "cseq/emit.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <stdexcept>

#include "json.hpp"

namespace cseq {

using nlohmann::json;

std::string format_double(double x) {
  if (x == kInf) return "inf";
  if (x == -kInf) return "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_csv(const ExperimentResult& result, std::ostream& os) {
  os << "method,trial,t,volume,covered,active_count,stop_t,time_uniform\n";
  const std::size_t methods = result.trials.empty() ? 0 : result.trials.front().traces.size();
  for (std::size_t mi = 0; mi < methods; ++mi) {
    for (const auto& trial : result.trials) {
      const auto& trace = trial.traces[mi];
      const std::string stop = trace.stop_t ? std::to_string(*trace.stop_t) : "";
      for (std::size_t t = 0; t < trace.steps.size(); ++t) {
        const auto& s = trace.steps[t];
        os << trace.method << ',' << trial.trial << ',' << t << ',' << format_double(s.volume) << ','
           << (s.covered ? 1 : 0) << ',' << s.active_count << ',' << stop << ','
           << (trace.time_uniform ? 1 : 0) << '\n';
      }
    }
  }
}

namespace {

// Runtime-only fields (threads, output paths) are left out of result files so
// that reruns with a different thread count or destination stay byte-identical.
json config_json(const ExperimentConfig& c, bool runtime) {
  json j;
  j["preset"] = std::string(to_string(c.preset));
  j["k"] = c.k;
  j["horizon"] = c.horizon;
  j["trials"] = c.trials;
  j["delta"] = c.delta;
  j["mu"] = c.mu;
  j["conc"] = c.conc;
  j["census"] = c.census;
  std::vector<std::string> methods;
  for (auto m : c.methods) methods.emplace_back(to_string(m));
  j["methods"] = methods;
  std::vector<std::string> wor;
  for (auto m : c.wor_methods) wor.emplace_back(to_string(m));
  j["wor_methods"] = wor;
  j["seed"] = c.seed;
  j["grid"] = c.grid;
  j["alpha"] = c.alpha;
  if (runtime) {
    j["threads"] = c.threads;
    j["out"] = c.out;
    j["json"] = c.json;
    j["svg"] = c.svg;
  }
  return j;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& config) { return config_json(config, true).dump(2); }

ExperimentConfig config_from_json(std::string_view text) {
  const json j = json::parse(text);
  if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");
  const Preset preset = j.contains("preset") ? parse_preset(j.at("preset").get<std::string>()) : Preset::kCustom;
  const std::size_t k = j.contains("k") ? j.at("k").get<std::size_t>() : 3;
  ExperimentConfig c = preset_config(preset, k);

  static const std::set<std::string> known = {"preset", "k",     "horizon", "trials", "delta",  "mu",
                                              "conc",   "census", "methods", "wor_methods", "seed", "grid",
                                              "alpha",  "threads", "out",    "json",   "svg"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw std::invalid_argument("unknown config field '" + key + "'");
  }
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
  };
  get("horizon", c.horizon);
  get("trials", c.trials);
  get("delta", c.delta);
  if (j.contains("mu") || j.contains("conc") || j.contains("census")) {
    c.mu.clear();
    c.conc.clear();
    c.census.clear();
  }
  get("mu", c.mu);
  get("conc", c.conc);
  get("census", c.census);
  get("seed", c.seed);
  get("grid", c.grid);
  get("alpha", c.alpha);
  get("threads", c.threads);
  get("out", c.out);
  get("json", c.json);
  get("svg", c.svg);
  if (j.contains("methods")) {
    c.methods.clear();
    for (const auto& m : j.at("methods")) c.methods.push_back(parse_method(m.get<std::string>()));
  }
  if (j.contains("wor_methods")) {
    c.wor_methods.clear();
    for (const auto& m : j.at("wor_methods")) c.wor_methods.push_back(parse_wor_method(m.get<std::string>()));
  }
  return c;
}

void write_json(const ExperimentResult& result, std::ostream& os) {
  json rows = json::array();
  const std::size_t methods = result.trials.empty() ? 0 : result.trials.front().traces.size();
  for (std::size_t mi = 0; mi < methods; ++mi) {
    for (const auto& trial : result.trials) {
      const auto& trace = trial.traces[mi];
      for (std::size_t t = 0; t < trace.steps.size(); ++t) {
        const auto& s = trace.steps[t];
        rows.push_back({{"method", trace.method},
                        {"trial", trial.trial},
                        {"t", t},
                        {"volume", s.volume},
                        {"covered", s.covered},
                        {"active_count", s.active_count},
                        {"stop_t", trace.stop_t ? json(*trace.stop_t) : json(nullptr)},
                        {"time_uniform", trace.time_uniform}});
      }
    }
  }

  json summary;
  json per_method = json::array();
  for (const auto& s : result.summary) {
    json m = {{"method", s.method},
              {"time_uniform", s.time_uniform},
              {"mean_volume", s.mean_volume},
              {"coverage", s.coverage},
              {"uniform_coverage", s.uniform_coverage}};
    if (s.mean_stop_t) {
      m["mean_stop_t"] = *s.mean_stop_t;
      m["stop_histogram"] = s.stop_histogram;
    }
    per_method.push_back(std::move(m));
  }
  summary["methods"] = per_method;
  if (result.kt_ppr_ratio) summary["kt_ppr_ratio"] = *result.kt_ppr_ratio;
  if (result.mean_pairwise_ratio) summary["mean_pairwise_ratio"] = *result.mean_pairwise_ratio;
  if (result.kt_no_later_fraction) summary["kt_no_later_fraction"] = *result.kt_no_later_fraction;

  json doc = {{"config", config_json(result.config, false)}, {"rows", std::move(rows)}, {"summary", std::move(summary)}};
  os << doc.dump(1) << '\n';
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#17becf", "#bcbd22"};

std::string fixed(double x, int digits = 2) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

void panel(std::ostream& os, const ExperimentResult& result, double x0, double y0, double w, double h,
           const char* title, bool volume) {
  std::size_t steps = 0;
  for (const auto& s : result.summary) steps = std::max(steps, s.mean_volume.size());
  const double tmax = steps > 1 ? static_cast<double>(steps - 1) : 1.0;
  auto px = [&](double t) { return x0 + w * t / tmax; };
  auto py = [&](double v) { return y0 + h * (1.0 - v); };

  os << "<rect x=\"" << fixed(x0) << "\" y=\"" << fixed(y0) << "\" width=\"" << fixed(w) << "\" height=\""
     << fixed(h) << "\" fill=\"none\" stroke=\"#333\"/>\n";
  os << "<text x=\"" << fixed(x0 + w / 2) << "\" y=\"" << fixed(y0 - 10)
     << "\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  os << "<text x=\"" << fixed(x0 + w / 2) << "\" y=\"" << fixed(y0 + h + 36)
     << "\" text-anchor=\"middle\" font-size=\"12\">t</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double v = i / 4.0;
    os << "<text x=\"" << fixed(x0 - 6) << "\" y=\"" << fixed(py(v) + 4)
       << "\" text-anchor=\"end\" font-size=\"10\">" << fixed(v) << "</text>\n";
    const double t = tmax * i / 4.0;
    os << "<text x=\"" << fixed(px(t)) << "\" y=\"" << fixed(y0 + h + 16)
       << "\" text-anchor=\"middle\" font-size=\"10\">" << fixed(t, 0) << "</text>\n";
  }

  for (std::size_t mi = 0; mi < result.summary.size(); ++mi) {
    const auto& s = result.summary[mi];
    const auto& series = volume ? s.mean_volume : s.coverage;
    os << "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" << kPalette[mi % std::size(kPalette)] << '"';
    if (!s.time_uniform) os << " stroke-dasharray=\"6 4\"";
    os << " points=\"";
    for (std::size_t t = 0; t < series.size(); ++t) {
      os << (t ? " " : "") << fixed(px(static_cast<double>(t))) << ',' << fixed(py(series[t]));
    }
    os << "\"/>\n";
  }
}

}  // namespace

void write_svg(const ExperimentResult& result, std::ostream& os) {
  const double w = 400;
  const double h = 280;
  const double legend_h = 18.0 * static_cast<double>(result.summary.size());
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"" << fixed(h + 110 + legend_h, 0)
     << "\" font-family=\"sans-serif\">\n";
  panel(os, result, 60, 40, w, h, "relative volume", true);
  panel(os, result, 540, 40, w, h, "per-step coverage", false);
  double y = h + 100;
  for (std::size_t mi = 0; mi < result.summary.size(); ++mi, y += 18) {
    const auto& s = result.summary[mi];
    os << "<line x1=\"60\" x2=\"90\" y1=\"" << fixed(y) << "\" y2=\"" << fixed(y) << "\" stroke-width=\"1.5\" stroke=\""
       << kPalette[mi % std::size(kPalette)] << '"' << (s.time_uniform ? "" : " stroke-dasharray=\"6 4\"") << "/>\n";
    os << "<text x=\"98\" y=\"" << fixed(y + 4) << "\" font-size=\"12\">" << s.method << "</text>\n";
  }
  os << "</svg>\n";
}

void emit(const ExperimentResult& result, OutputFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  switch (format) {
    case OutputFormat::kCsv:
      write_csv(result, out);
      break;
    case OutputFormat::kJson:
      write_json(result, out);
      break;
    case OutputFormat::kSvg:
      write_svg(result, out);
      break;
  }
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace cseq

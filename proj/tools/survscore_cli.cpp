// Command-line front end. Exit codes: 0 ok, 1 internal error, 2 usage or
// input error, 3 degenerate data, 4 analysis failure.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "survscore/errors.hpp"
#include "survscore/io.hpp"
#include "survscore/model_fit.hpp"
#include "survscore/score_process.hpp"
#include "survscore/simulation.hpp"
#include "survscore/survival.hpp"

using namespace survscore;
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0, kInternal = 1, kInput = 2, kDegenerate = 3, kAnalysis = 4;

struct Context {
  json config;
  fs::path out;
};

std::string config_line(const json& config) {
  return std::string("# survscore ") + io::library_version() + " config=" + config.dump() + "\n";
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path.string() + "'");
  f << body;
  if (!f) throw InputError("failed writing '" + path.string() + "'");
}

void write_json(const Context& ctx, const std::string& name, json body) {
  json j;
  j["version"] = io::library_version();
  j["config"] = ctx.config;
  for (auto it = body.begin(); it != body.end(); ++it)
    if (it.key() != "version") j[it.key()] = it.value();
  write_file(ctx.out / name, j.dump(2) + "\n");
}

void write_csv(const Context& ctx, const std::string& name, const std::string& body) {
  write_file(ctx.out / name, config_line(ctx.config) + body);
}

Context make_context(const std::string& command, const std::string& out, json options) {
  if (out.empty()) throw InputError("--out is required");
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw InputError("cannot create output directory '" + out + "': " + ec.message());
  json config;
  config["command"] = command;
  for (auto it = options.begin(); it != options.end(); ++it) config[it.key()] = it.value();
  return Context{config, fs::path(out)};
}

std::string text_or_file(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '[' || arg[first] == '{')) return arg;
  return io::read_text_file(arg);
}

std::string fixed(double v, int digits) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(digits) << v;
  return ss.str();
}

double quantile(std::vector<double> v, double q) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

SurvivalDataset load_dataset(const std::string& path) {
  SurvivalDataset d = read_dataset_csv_file(path);
  const ValidationReport report = validate(d);
  if (!report.ok()) throw InputError("invalid dataset '" + path + "':\n" + report.to_string());
  return d;
}

// diagnose

struct DiagnoseOptions {
  std::string dataset;
  std::vector<double> beta0;
  double alpha = 0.05;
  std::string out;
};

int run_diagnose(const DiagnoseOptions& o) {
  const SurvivalDataset data = load_dataset(o.dataset);
  Vector beta0 = Vector::Zero(data.dimension);
  if (!o.beta0.empty()) {
    if (static_cast<Eigen::Index>(o.beta0.size()) != data.dimension)
      throw InputError("--beta0 needs " + std::to_string(data.dimension) + " values");
    beta0 = Eigen::Map<const Vector>(o.beta0.data(), data.dimension);
  }
  std::vector<double> b(beta0.data(), beta0.data() + beta0.size());
  const Context ctx =
      make_context("diagnose", o.out, json{{"dataset", o.dataset}, {"beta0", b}, {"alpha", o.alpha}, {"out", o.out}});

  const TransformedDataset t = time_transform(data);
  const ScoreProcessTrace trace = score_process(t, beta0);
  const std::vector<ConfidenceBand> bands = confidence_bands(trace, o.alpha);

  std::ostringstream csv;
  io::write_trace_csv(csv, trace, bands);
  write_csv(ctx, "process.csv", csv.str());
  write_json(ctx, "decisions.json", json::parse(io::trace_json(trace, bands)));

  for (const ConfidenceBand& band : bands)
    std::cout << "component " << band.component + 1 << ": sup statistic "
              << fixed(bridge_sup_statistic(trace, band.component), 4)
              << (band.crossed ? ", constant effect rejected" : ", within band") << " at alpha " << o.alpha << "\n";
  return kOk;
}

// fit

struct FitOptionsCli {
  std::string dataset;
  std::string candidates;
  std::string out;
};

int run_fit(const FitOptionsCli& o) {
  const SurvivalDataset data = load_dataset(o.dataset);
  CandidateSet set = io::parse_candidate_set(io::read_text_file(o.candidates));
  io::conform_candidates(set, data.dimension);
  const json resolved = json::parse(io::candidate_set_json(set))["candidates"];
  const Context ctx = make_context(
      "fit", o.out, json{{"dataset", o.dataset}, {"candidates", o.candidates}, {"resolved_candidates", resolved}, {"out", o.out}});

  const Selection selection = select_effect(time_transform(data), set);
  std::ostringstream csv;
  io::write_ranking_csv(csv, selection);
  write_csv(ctx, "ranking.csv", csv.str());
  json sel = json::parse(io::selection_json(selection));
  json body;
  body["best"] = sel["ranking"][0];
  body["ranking"] = sel["ranking"];
  body["failures"] = sel["failures"];
  write_json(ctx, "best_model.json", body);

  for (const CandidateFailure& f : selection.failures)
    std::cerr << "candidate " << f.name << " failed: " << f.reason << "\n";
  std::cout << "best: " << selection.best().name << " (R2 " << fixed(selection.best().fit.r2.value, 4) << ", "
            << selection.best().fit.effect.describe() << ")\n";
  return kOk;
}

// simulate

struct SimulateOptions {
  std::string scenario;
  std::size_t replicates = 1;
  std::string analyses;
  unsigned threads = 0;
  std::string out;
};

int run_simulate(const SimulateOptions& o) {
  if (o.replicates < 1) throw InputError("--replicates must be at least 1");
  const SimulationScenario sc = io::parse_scenario(io::read_text_file(o.scenario));
  const std::vector<Analysis> analyses =
      o.analyses.empty() ? std::vector<Analysis>{BandAnalysis{}} : io::parse_analyses(text_or_file(o.analyses));
  const Context ctx = make_context("simulate", o.out,
                                   json{{"scenario", o.scenario},
                                        {"replicates", o.replicates},
                                        {"analyses", o.analyses.empty() ? "band" : o.analyses},
                                        {"out", o.out}});
  const ReplicationReport report = run_replications(sc, o.replicates, analyses, o.threads);
  write_json(ctx, "report.json", json::parse(io::report_json(report)));
  std::ostringstream csv;
  io::write_report_csv(csv, report);
  write_csv(ctx, "report.csv", csv.str());
  std::size_t failed = 0;
  for (const auto& r : report.records) failed += !r.error.empty();
  std::cout << report.records.size() << " replicates written";
  if (failed) std::cout << " (" << failed << " with dataset-level errors)";
  std::cout << "\n";
  return kOk;
}

// reproduce

struct ReproduceOptions {
  int table = 0;
  int figure = 0;
  std::uint64_t seed = 20090501;
  std::size_t replicates = 200;
  unsigned threads = 0;
  std::string out;
};

SimulationScenario univariate(TemporalEffect effect, std::uint64_t seed) {
  SimulationScenario sc;
  sc.n = 200;
  sc.p = 1;
  sc.covariates = BernoulliLaw{0.5};
  sc.true_effect = std::move(effect);
  sc.seed = seed;
  return sc;
}

SimulationScenario bivariate(std::uint64_t seed) {
  SimulationScenario sc;
  sc.n = 200;
  sc.p = 2;
  Matrix cov(2, 2);
  cov << 1.0, 0.5, 0.5, 1.0;
  sc.covariates = GaussianLaw{Vector::Zero(2), cov};
  Vector loadings(2);
  loadings << 1.0, -1.0;
  sc.true_effect = TemporalEffect(loadings, {basis::Changepoint{0.5, 0.0}, basis::Constant{}});
  sc.seed = seed;
  return sc;
}

struct TableSpec {
  SimulationScenario scenario;
  CandidateSet candidates;
  std::vector<std::string> quantities;                // per-component loading names, then r2
  std::vector<std::vector<double>> reference;  // [quantity][candidate]
};

TableSpec table_spec(int table, std::uint64_t seed) {
  TableSpec spec;
  if (table == 1) {
    spec.scenario = univariate(TemporalEffect(Vector::Constant(1, 3.0), {basis::Power{2.0}}), seed);
    auto one = [](std::string name, Basis b, bool automatic = false) {
      return Candidate{std::move(name), {ComponentSpec{std::move(b), automatic}}};
    };
    spec.candidates.candidates = {one("constant", basis::Constant{}), one("(1-t)", basis::Power{1.0}),
                                  one("(1-t)^2", basis::Power{2.0}), one("(1-t^2)", basis::OneMinusSquare{}),
                                  one("changepoint(0.5)", basis::Changepoint{0.5, 0.0}, true)};
    spec.quantities = {"beta0", "r2"};
    spec.reference = {{1.06, 2.45, 3.73, 1.77, 1.83}, {0.25, 0.36, 0.37, 0.34, 0.34}};
  } else {
    spec.scenario = bivariate(seed);
    spec.candidates.candidates.push_back(Candidate{"constant", {ComponentSpec{}, ComponentSpec{}}});
    for (double t0 : {0.45, 0.5, 0.55, 0.6, 0.65, 0.7})
      spec.candidates.candidates.push_back(Candidate{
          "changepoint(" + fixed(t0, 2) + ")", {ComponentSpec{basis::Changepoint{t0, 0.0}, true}, ComponentSpec{}}});
    spec.quantities = {"beta1", "beta2", "r2"};
    spec.reference = {{0.45, 0.93, 0.96, 0.89, 0.95, 0.86, 0.72},
                  {-0.73, -0.72, -0.73, -0.74, -0.79, -0.80, -0.77},
                  {0.24, 0.35, 0.37, 0.35, 0.39, 0.37, 0.32}};
  }
  return spec;
}

int reproduce_table(const ReproduceOptions& o, const Context& ctx) {
  const TableSpec spec = table_spec(o.table, o.seed);
  const ReplicationReport report =
      run_replications(spec.scenario, o.replicates, {SelectAnalysis{spec.candidates}}, o.threads);
  const std::size_t m = spec.candidates.candidates.size();
  const std::size_t nq = spec.quantities.size();
  std::vector<std::vector<std::vector<double>>> values(nq, std::vector<std::vector<double>>(m));
  std::vector<std::size_t> top(m, 0);
  std::size_t used = 0;
  for (const auto& rec : report.records) {
    if (!rec.selection) continue;
    ++used;
    for (std::size_t c = 0; c < m; ++c) {
      const FitRecord& f = rec.selection->fits[c];
      if (!rec.selection->ranking.empty() && rec.selection->ranking.front() == spec.candidates.candidates[c].name)
        ++top[c];
      if (!f.error.empty()) continue;
      for (std::size_t q = 0; q + 1 < nq; ++q) values[q][c].push_back(f.loadings(static_cast<Eigen::Index>(q)));
      values[nq - 1][c].push_back(f.r2);
    }
  }

  std::ostringstream csv;
  csv << std::setprecision(17) << "source,quantity";
  for (const Candidate& c : spec.candidates.candidates) csv << ",\"" << c.name << '"';
  csv << '\n';
  for (std::size_t q = 0; q < nq; ++q) {
    csv << "reference," << spec.quantities[q];
    for (double v : spec.reference[q]) csv << ',' << v;
    csv << '\n';
  }
  json summary = json::object();
  for (std::size_t q = 0; q < nq; ++q) {
    const std::string& name = spec.quantities[q];
    std::vector<std::vector<double>> rows(6, std::vector<double>(m));
    for (std::size_t c = 0; c < m; ++c) {
      const MeanSe s = mean_se(values[q][c]);
      rows[0][c] = s.mean;
      rows[1][c] = s.se;
      rows[2][c] = s.mean - 1.96 * s.se;
      rows[3][c] = s.mean + 1.96 * s.se;
      rows[4][c] = quantile(values[q][c], 0.025);
      rows[5][c] = quantile(values[q][c], 0.975);
      summary[spec.candidates.candidates[c].name][name] = json{{"reference", spec.reference[q][c]},
                                                                {"mean", s.mean},
                                                                {"mc_se", s.se},
                                                                {"replicate_p025", rows[4][c]},
                                                                {"replicate_p975", rows[5][c]},
                                                                {"fits", s.count}};
    }
    const char* labels[] = {"_mean", "_mc_se", "_mean_lower95", "_mean_upper95", "_replicate_p025", "_replicate_p975"};
    for (std::size_t r = 0; r < rows.size(); ++r) {
      csv << "simulated," << name << labels[r];
      for (double v : rows[r]) csv << ',' << v;
      csv << '\n';
    }
  }
  csv << "simulated,top_rank_frequency";
  for (std::size_t c = 0; c < m; ++c) {
    const double freq = used ? static_cast<double>(top[c]) / static_cast<double>(used) : 0.0;
    csv << ',' << freq;
    summary[spec.candidates.candidates[c].name]["top_rank_frequency"] = freq;
  }
  csv << '\n';

  const std::string stem = "table" + std::to_string(o.table);
  write_csv(ctx, stem + ".csv", csv.str());
  json body;
  body["scenario"] = json::parse(io::scenario_json(spec.scenario));
  body["replicates"] = o.replicates;
  body["replicates_analysed"] = used;
  body["candidates"] = summary;
  write_json(ctx, stem + ".json", body);

  std::cout << "candidate, reference R2, simulated mean R2 (MC se), top-rank frequency\n";
  for (std::size_t c = 0; c < m; ++c) {
    const MeanSe s = mean_se(values[nq - 1][c]);
    std::cout << "  " << spec.candidates.candidates[c].name << ": " << fixed(spec.reference[nq - 1][c], 2) << ", "
              << fixed(s.mean, 3) << " (" << fixed(s.se, 3) << "), "
              << fixed(used ? static_cast<double>(top[c]) / static_cast<double>(used) : 0.0, 3) << "\n";
  }
  return kOk;
}

struct Panel {
  std::string label;
  std::string caption;
  TemporalEffect effect;
};

std::vector<Panel> figure_panels(int figure) {
  if (figure == 1)
    return {{"beta_0", "beta = 0", TemporalEffect::zero(1)},
            {"beta_0.5", "beta = 0.5", TemporalEffect::constant(Vector::Constant(1, 0.5))}};
  return {{"a", "beta(t) = I(t <= 0.5)", TemporalEffect(Vector::Ones(1), {basis::Changepoint{0.5, 0.0}})},
          {"b", "beta(t) = I(t <= 1/3) + 0.5 I(t > 2/3)",
           TemporalEffect(Vector::Ones(1), {basis::Table{{1.0 / 3.0, 2.0 / 3.0}, {1.0, 0.0, 0.5}}})}};
}

int reproduce_figure(const ReproduceOptions& o, const Context& ctx) {
  constexpr std::size_t kGrid = 101;
  json panels = json::array();
  std::uint64_t panel_seed = o.seed;
  for (const Panel& panel : figure_panels(o.figure)) {
    const SimulationScenario sc = univariate(panel.effect, panel_seed++);
    const std::string stem = "figure" + std::to_string(o.figure) + "_" + panel.label;

    // A single draw, as plotted.
    const TransformedDataset draw = time_transform(simulate_dataset(sc));
    const ScoreProcessTrace trace = score_process(draw, Vector::Zero(1));
    const std::vector<ConfidenceBand> bands = confidence_bands(trace, 0.05);
    std::ostringstream csv;
    io::write_trace_csv(csv, trace, bands);
    write_csv(ctx, stem + "_process.csv", csv.str());

    // Monte-Carlo envelope of the standardised process, linearly interpolated
    // onto a fixed grid.
    std::vector<std::vector<double>> at(kGrid);
    std::vector<double> root_k;
    for (std::size_t r = 0; r < o.replicates; ++r) {
      SimulationScenario rep = sc;
      rep.seed = replicate_seed(sc.seed, r);
      try {
        const ScoreProcessTrace tr = score_process(time_transform(simulate_dataset(rep)), Vector::Zero(1));
        if (!tr.standardized()) continue;
        root_k.push_back(std::sqrt(static_cast<double>(tr.k_n())));
        for (std::size_t g = 0; g < kGrid; ++g) {
          const double t = static_cast<double>(g) / static_cast<double>(kGrid - 1);
          const auto hi = static_cast<std::size_t>(
              std::max<std::ptrdiff_t>(1, std::lower_bound(tr.grid.begin(), tr.grid.end(), t) - tr.grid.begin()));
          const double w = (t - tr.grid[hi - 1]) / (tr.grid[hi] - tr.grid[hi - 1]);
          const auto& v = *tr.standardized_values;
          at[g].push_back((1.0 - w) * v(static_cast<Eigen::Index>(hi - 1), 0) + w * v(static_cast<Eigen::Index>(hi), 0));
        }
      } catch (const Error&) {
      }
    }
    const double mean_root_k = mean_se(root_k).mean;
    std::ostringstream env;
    env << std::setprecision(17) << "t,mean,mc_se,p025,p975,expected\n";
    for (std::size_t g = 0; g < kGrid; ++g) {
      const double t = static_cast<double>(g) / static_cast<double>(kGrid - 1);
      const MeanSe s = mean_se(at[g]);
      env << t << ',' << s.mean << ',' << s.se << ',' << quantile(at[g], 0.025) << ',' << quantile(at[g], 0.975)
          << ',' << mean_root_k * panel.effect.loadings()(0) * integrate_basis(panel.effect.shapes()[0], t) << '\n';
    }
    write_csv(ctx, stem + "_envelope.csv", env.str());

    json p;
    p["panel"] = panel.label;
    p["caption"] = panel.caption;
    p["scenario"] = json::parse(io::scenario_json(sc));
    p["single_draw"] = json::parse(io::trace_json(trace, bands))["decisions"];
    p["replicates_analysed"] = root_k.size();
    p["files"] = {stem + "_process.csv", stem + "_envelope.csv"};
    panels.push_back(p);
    std::cout << stem << ": k_n " << trace.k_n() << ", sup statistic " << fixed(bridge_sup_statistic(trace, 0), 4)
              << (bands[0].crossed ? ", leaves" : ", stays within") << " the 95% band\n";
  }
  write_json(ctx, "figure" + std::to_string(o.figure) + ".json", json{{"panels", panels}});
  return kOk;
}

int run_reproduce(const ReproduceOptions& o) {
  if ((o.table != 0) == (o.figure != 0)) throw InputError("give exactly one of --table or --figure");
  if (o.table != 0 && o.table != 1 && o.table != 2)
    throw InputError("unknown table " + std::to_string(o.table) + " (available: 1, 2)");
  if (o.figure != 0 && o.figure != 1 && o.figure != 2)
    throw InputError("unknown figure " + std::to_string(o.figure) + " (available: 1, 2)");
  if (o.replicates < 1) throw InputError("--replicates must be at least 1");
  json options{{"seed", o.seed}, {"replicates", o.replicates}, {"out", o.out}};
  if (o.table) options["table"] = o.table;
  if (o.figure) options["figure"] = o.figure;
  const Context ctx = make_context("reproduce", o.out, options);
  return o.table ? reproduce_table(o, ctx) : reproduce_figure(o, ctx);
}

// --config FILE: a JSON object whose keys are option names. Values are
// spliced in before the command line, so explicit flags win.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::vector<std::string> out;
  std::vector<std::string> injected;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
      continue;
    }
    json cfg;
    try {
      cfg = json::parse(io::read_text_file(path));
    } catch (const json::exception& e) {
      throw InputError("config '" + path + "': " + e.what());
    }
    if (!cfg.is_object()) throw InputError("config '" + path + "' must be a JSON object");
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
      const std::string flag = "--" + it.key();
      if (it->is_boolean()) {
        if (it->get<bool>()) injected.push_back(flag);
      } else if (it->is_array()) {
        for (const json& v : *it) {
          injected.push_back(flag);
          injected.push_back(v.is_string() ? v.get<std::string>() : v.dump());
        }
      } else {
        injected.push_back(flag);
        injected.push_back(it->is_string() ? it->get<std::string>() : it->dump());
      }
    }
  }
  // Subcommand name first, then config values, then the explicit arguments.
  if (!injected.empty() && !out.empty()) out.insert(out.begin() + 1, injected.begin(), injected.end());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Score-process diagnostics and temporal-effect selection for survival data", "survscore"};
  app.set_version_flag("--version", std::string(io::library_version()));
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.add_option("--config", "JSON file of option values (explicit flags take precedence)");

  DiagnoseOptions diag;
  auto* d = app.add_subcommand("diagnose", "Standardised score process, confidence bands and decisions");
  d->add_option("dataset", diag.dataset, "CSV with id,time,status,z1..zp")->required();
  d->add_option("--beta0", diag.beta0, "Evaluation point, comma separated (default 0)")
      ->delimiter(',')
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  d->add_option("--alpha", diag.alpha, "Band level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  d->add_option("--out", diag.out, "Output directory")->required();

  FitOptionsCli fit;
  auto* f = app.add_subcommand("fit", "Fit and rank candidate temporal effects by R2");
  f->add_option("dataset", fit.dataset, "CSV with id,time,status,z1..zp")->required();
  f->add_option("--candidates", fit.candidates, "Candidate-set JSON")->required();
  f->add_option("--out", fit.out, "Output directory")->required();

  SimulateOptions sim;
  auto* s = app.add_subcommand("simulate", "Replicated simulation study");
  s->add_option("scenario", sim.scenario, "Scenario JSON")->required();
  s->add_option("--replicates", sim.replicates, "Number of replicates")->capture_default_str();
  s->add_option("--analyses", sim.analyses, "Analyses JSON file or inline JSON (default: band)");
  s->add_option("--threads", sim.threads, "Worker threads (0: SURVSCORE_THREADS or all cores)");
  s->add_option("--out", sim.out, "Output directory")->required();

  ReproduceOptions rep;
  auto* r = app.add_subcommand("reproduce", "Regenerate the simulated tables and figures");
  auto* table = r->add_option("--table", rep.table, "Table number (1 or 2)");
  auto* figure = r->add_option("--figure", rep.figure, "Figure number (1 or 2)");
  table->excludes(figure);
  r->add_option("--seed", rep.seed, "Base seed")->capture_default_str();
  r->add_option("--replicates", rep.replicates, "Monte-Carlo replicates")->capture_default_str();
  r->add_option("--threads", rep.threads, "Worker threads (0: SURVSCORE_THREADS or all cores)");
  r->add_option("--out", rep.out, "Output directory")->required();

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  }

  try {
    if (*d) return run_diagnose(diag);
    if (*f) return run_fit(fit);
    if (*s) return run_simulate(sim);
    if (*r) return run_reproduce(rep);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const DegenerateData& e) {
    std::cerr << "degenerate data: " << e.what() << "\n";
    return kDegenerate;
  } catch (const AnalysisError& e) {
    std::cerr << "analysis failed: " << e.what() << "\n";
    return kAnalysis;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}

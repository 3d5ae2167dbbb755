#include "survscore/io.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "survscore/errors.hpp"

namespace survscore::io {

using json = nlohmann::ordered_json;

namespace {

json parse(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid ") + what + " JSON: " + e.what());
  }
}

template <typename T>
T get(const json& j, const char* key, const T& fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("field '") + key + "' has the wrong type");
  }
}

template <typename T>
T require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("field '") + key + "' has the wrong type");
  }
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json matrix_json(const Matrix& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row(i).transpose()));
  return a;
}

Vector vector_from(const json& j, const char* what) {
  if (!j.is_array()) throw InputError(std::string(what) + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError(std::string(what) + " must hold numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Matrix matrix_from(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw InputError(std::string(what) + " must be a nested array");
  const auto rows = static_cast<Eigen::Index>(j.size());
  Matrix m(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Vector row = vector_from(j[static_cast<std::size_t>(i)], what);
    if (row.size() != rows) throw InputError(std::string(what) + " must be square");
    m.row(i) = row.transpose();
  }
  return m;
}

json basis_json(const Basis& b) {
  json j;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, basis::Constant>) {
          j["basis"] = "constant";
        } else if constexpr (std::is_same_v<T, basis::Changepoint>) {
          j["basis"] = "changepoint";
          j["t0"] = s.t0;
          j["ratio"] = s.ratio;
        } else if constexpr (std::is_same_v<T, basis::Power>) {
          j["basis"] = "power";
          j["k"] = s.k;
        } else if constexpr (std::is_same_v<T, basis::OneMinusSquare>) {
          j["basis"] = "one_minus_square";
        } else if constexpr (std::is_same_v<T, basis::LogT>) {
          j["basis"] = "log";
        } else if constexpr (std::is_same_v<T, basis::Table>) {
          j["basis"] = "table";
          j["breaks"] = s.breaks;
          j["values"] = s.values;
        } else {
          j["basis"] = "custom";
          j["label"] = s.label;
        }
      },
      b);
  return j;
}

ComponentSpec component_from(const json& j) {
  if (j.is_string()) return component_from(json{{"basis", j.get<std::string>()}});
  if (!j.is_object()) throw InputError("component must be an object or a basis name");
  const std::string kind = get<std::string>(j, "basis", "constant");
  ComponentSpec spec;
  if (kind == "constant") {
    spec.basis = basis::Constant{};
  } else if (kind == "changepoint") {
    basis::Changepoint cp;
    cp.t0 = require<double>(j, "t0");
    if (!(cp.t0 > 0.0 && cp.t0 < 1.0)) throw DomainError("changepoint t0 must lie in (0, 1)");
    if (j.contains("ratio") && j.at("ratio").is_string()) {
      if (j.at("ratio").get<std::string>() != "auto") throw InputError("ratio must be a number or \"auto\"");
      spec.auto_ratio = true;
    } else {
      cp.ratio = get<double>(j, "ratio", 0.0);
    }
    spec.basis = cp;
  } else if (kind == "power") {
    spec.basis = basis::Power{get<double>(j, "k", 1.0)};
  } else if (kind == "one_minus_square") {
    spec.basis = basis::OneMinusSquare{};
  } else if (kind == "log") {
    spec.basis = basis::LogT{};
  } else if (kind == "table") {
    basis::Table t;
    t.breaks = require<std::vector<double>>(j, "breaks");
    t.values = require<std::vector<double>>(j, "values");
    if (t.values.size() != t.breaks.size() + 1)
      throw InputError("table basis needs one more value than breaks");
    for (std::size_t i = 1; i < t.breaks.size(); ++i)
      if (!(t.breaks[i] > t.breaks[i - 1])) throw InputError("table breaks must increase");
    spec.basis = std::move(t);
  } else {
    throw InputError("unknown basis '" + kind + "'");
  }
  return spec;
}

Candidate candidate_from(const json& j, std::size_t index) {
  Candidate c;
  c.name = "candidate_" + std::to_string(index + 1);
  json single = json::array();
  const json* components = &j;
  if (j.is_object()) {
    c.name = get<std::string>(j, "name", c.name);
    if (j.contains("components")) {
      components = &j.at("components");
    } else if (j.contains("basis")) {
      single.push_back(j);
      components = &single;
    } else {
      throw InputError("candidate needs 'components'");
    }
  }
  if (!components->is_array() || components->empty())
    throw InputError("candidate components must be a non-empty array");
  // Components go to their 1-based "component" index, else their array
  // position; unlisted covariates keep a constant effect.
  std::vector<std::optional<ComponentSpec>> slots;
  for (std::size_t i = 0; i < components->size(); ++i) {
    const json& comp = (*components)[i];
    std::size_t pos = i;
    if (comp.is_object() && comp.contains("component")) {
      const long idx = require<long>(comp, "component");
      if (idx < 1) throw InputError("component index must be at least 1");
      pos = static_cast<std::size_t>(idx - 1);
    }
    if (pos >= slots.size()) slots.resize(pos + 1);
    if (slots[pos]) throw InputError("component " + std::to_string(pos + 1) + " specified twice");
    slots[pos] = component_from(comp);
  }
  for (auto& s : slots) c.components.push_back(s ? *s : ComponentSpec{});
  return c;
}

CandidateSet candidate_set_from(const json& j) {
  const json& list = j.is_object() ? j.at("candidates") : j;
  if (!list.is_array() || list.empty()) throw InputError("candidate set must be a non-empty array");
  CandidateSet set;
  for (std::size_t i = 0; i < list.size(); ++i) set.candidates.push_back(candidate_from(list[i], i));
  return set;
}

json candidate_json(const Candidate& c) {
  json comps = json::array();
  for (std::size_t i = 0; i < c.components.size(); ++i) {
    json b = basis_json(c.components[i].basis);
    if (c.components[i].auto_ratio) b["ratio"] = "auto";
    b["component"] = i + 1;
    comps.push_back(b);
  }
  return json{{"name", c.name}, {"components", comps}};
}

TemporalEffect effect_from(const json& j) {
  if (j.is_number()) return TemporalEffect::constant(Vector::Constant(1, j.get<double>()));
  const json& comps = j.is_object() ? j.at("components") : j;
  if (!comps.is_array() || comps.empty()) throw InputError("effect components must be a non-empty array");
  Vector loadings(static_cast<Eigen::Index>(comps.size()));
  std::vector<Basis> shapes;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const ComponentSpec spec = component_from(comps[i]);
    if (spec.auto_ratio) throw InputError("an effect cannot use an automatic ratio");
    shapes.push_back(spec.basis);
    loadings(static_cast<Eigen::Index>(i)) = comps[i].is_object() ? get<double>(comps[i], "loading", 1.0) : 1.0;
  }
  return TemporalEffect(loadings, shapes);
}

json effect_to_json(const TemporalEffect& effect) {
  json comps = json::array();
  for (Eigen::Index i = 0; i < effect.dimension(); ++i) {
    json b = basis_json(effect.shapes()[static_cast<std::size_t>(i)]);
    b["loading"] = effect.loadings()(i);
    comps.push_back(b);
  }
  return json{{"components", comps}};
}

json scenario_to_json(const SimulationScenario& sc) {
  json j;
  j["n"] = sc.n;
  j["p"] = sc.p;
  if (const auto* b = std::get_if<BernoulliLaw>(&sc.covariates)) {
    j["covariates"] = json{{"law", "bernoulli"}, {"q", b->q}};
  } else {
    const auto& g = std::get<GaussianLaw>(sc.covariates);
    j["covariates"] = json{{"law", "gaussian"}, {"mean", vector_json(g.mean)}, {"covariance", matrix_json(g.covariance)}};
  }
  j["true_effect"] = effect_to_json(sc.true_effect);
  j["baseline"] = sc.baseline;
  j["time_horizon"] = sc.time_horizon;
  if (const auto* e = std::get_if<ExponentialCensoring>(&sc.censoring))
    j["censoring"] = json{{"type", "exponential"}, {"rate", e->rate}};
  else if (const auto* a = std::get_if<AdministrativeCensoring>(&sc.censoring))
    j["censoring"] = json{{"type", "administrative"}, {"cutoff", a->cutoff}};
  else
    j["censoring"] = json{{"type", "none"}};
  j["generator"] = sc.generator == Generator::RankConditional ? "rank_conditional" : "absolute_time";
  j["seed"] = sc.seed;
  return j;
}

json analysis_to_json(const Analysis& a) {
  if (const auto* b = std::get_if<BandAnalysis>(&a)) return json{{"type", "band"}, {"alphas", b->alphas}};
  if (const auto* f = std::get_if<FitAnalysis>(&a)) {
    json j = candidate_json(f->model);
    return json{{"type", "fit"}, {"name", j["name"]}, {"components", j["components"]}};
  }
  if (const auto* s = std::get_if<SelectAnalysis>(&a)) {
    json list = json::array();
    for (const Candidate& c : s->candidates.candidates) list.push_back(candidate_json(c));
    return json{{"type", "select"}, {"candidates", list}};
  }
  return json{{"type", "drift"}, {"times", std::get<DriftAnalysis>(a).times}};
}

json fit_record_json(const FitRecord& f) {
  json j{{"name", f.name}};
  if (!f.error.empty()) {
    j["error"] = f.error;
    return j;
  }
  j["loadings"] = vector_json(f.loadings);
  j["shapes"] = f.shapes;
  j["r2"] = f.r2;
  j["loglik"] = f.loglik;
  j["converged"] = f.converged;
  return j;
}

json mean_se_json(const std::vector<double>& v) {
  const MeanSe m = mean_se(v);
  return json{{"mean", m.mean}, {"se", m.se}, {"count", m.count}};
}

// Summary of successful fits with the same name.
json fit_summary(const std::vector<const FitRecord*>& fits) {
  std::size_t failed = 0;
  std::vector<double> r2;
  std::vector<std::vector<double>> loadings;
  for (const FitRecord* f : fits) {
    if (!f->error.empty()) {
      ++failed;
      continue;
    }
    r2.push_back(f->r2);
    if (loadings.size() < static_cast<std::size_t>(f->loadings.size()))
      loadings.resize(static_cast<std::size_t>(f->loadings.size()));
    for (Eigen::Index c = 0; c < f->loadings.size(); ++c)
      loadings[static_cast<std::size_t>(c)].push_back(f->loadings(c));
  }
  json l = json::array();
  for (const auto& v : loadings) l.push_back(mean_se_json(v));
  return json{{"failed", failed}, {"r2", mean_se_json(r2)}, {"loadings", l}};
}

json summary_json(const ReplicationReport& report) {
  json s;
  std::size_t failed = 0;
  for (const auto& r : report.records) failed += r.error.empty() ? 0 : 1;
  s["replicates"] = report.records.size();
  s["failed_replicates"] = failed;

  for (std::size_t a = 0; a < report.analyses.size(); ++a) {
    const Analysis& an = report.analyses[a];
    if (const auto* band = std::get_if<BandAnalysis>(&an)) {
      json rates = json::array();
      for (std::size_t k = 0; k < band->alphas.size(); ++k) {
        std::vector<std::vector<double>> hits;
        for (const auto& r : report.records) {
          if (!r.band) continue;
          const auto& rej = r.band->rejected[k];
          if (hits.size() < rej.size()) hits.resize(rej.size());
          for (std::size_t c = 0; c < rej.size(); ++c) hits[c].push_back(rej[c] ? 1.0 : 0.0);
        }
        json per = json::array();
        for (const auto& h : hits) per.push_back(mean_se_json(h));
        rates.push_back(json{{"alpha", band->alphas[k]}, {"rejection_rate", per}});
      }
      s["band"] = rates;
    } else if (const auto* fit = std::get_if<FitAnalysis>(&an)) {
      std::vector<const FitRecord*> fits;
      for (const auto& r : report.records)
        for (const auto& f : r.fits)
          if (f.name == fit->model.name) fits.push_back(&f);
      s["fits"][fit->model.name] = fit_summary(fits);
    } else if (const auto* sel = std::get_if<SelectAnalysis>(&an)) {
      json cands = json::array();
      std::size_t usable = 0;
      for (const auto& r : report.records) usable += (r.selection && !r.selection->ranking.empty()) ? 1 : 0;
      for (std::size_t c = 0; c < sel->candidates.candidates.size(); ++c) {
        const std::string& name = sel->candidates.candidates[c].name;
        std::vector<const FitRecord*> fits;
        double best = 0.0;
        for (const auto& r : report.records) {
          if (!r.selection || r.selection->fits.size() <= c) continue;
          fits.push_back(&r.selection->fits[c]);
          if (!r.selection->ranking.empty() && r.selection->ranking.front() == name) best += 1.0;
        }
        json j = fit_summary(fits);
        j = json{{"name", name}, {"selected_frequency", usable ? best / static_cast<double>(usable) : 0.0},
                 {"r2", j["r2"]}, {"loadings", j["loadings"]}, {"failed", j["failed"]}};
        cands.push_back(j);
      }
      s["selection"] = cands;
    } else if (const auto* drift = std::get_if<DriftAnalysis>(&an)) {
      json points = json::array();
      for (std::size_t t = 0; t < drift->times.size(); ++t) {
        std::vector<std::vector<double>> obs, exp;
        for (const auto& r : report.records) {
          if (!r.drift) continue;
          const auto cols = static_cast<std::size_t>(r.drift->standardized.cols());
          if (obs.size() < cols) {
            obs.resize(cols);
            exp.resize(cols);
          }
          for (std::size_t c = 0; c < cols; ++c) {
            obs[c].push_back(r.drift->standardized(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c)));
            exp[c].push_back(r.drift->expected(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(c)));
          }
        }
        json comps = json::array();
        for (std::size_t c = 0; c < obs.size(); ++c)
          comps.push_back(json{{"observed", mean_se_json(obs[c])}, {"expected", mean_se_json(exp[c])}});
        points.push_back(json{{"t", drift->times[t]}, {"components", comps}});
      }
      s["drift"] = points;
    }
  }
  return s;
}

std::string dump(const json& j) { return j.dump(2); }

std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string q = "\"";
  for (char ch : v) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

json trace_to_json(const ScoreProcessTrace& trace, const std::vector<ConfidenceBand>& bands) {
  json j;
  j["k_n"] = trace.k_n();
  j["beta0"] = vector_json(trace.beta0);
  j["t"] = trace.grid;
  j["u"] = matrix_json(trace.values);
  if (trace.standardized()) j["s"] = matrix_json(*trace.standardized_values);
  if (trace.sigma) {
    j["sigma_hat"] = matrix_json(trace.sigma->matrix);
    j["sigma_hat_inv_sqrt"] = matrix_json(trace.sigma->inv_sqrt);
  }
  json decisions = json::array();
  for (const ConfidenceBand& b : bands) {
    json d{{"component", b.component + 1},
           {"alpha", b.alpha},
           {"slope", b.slope},
           {"half_width", b.half_width},
           {"statistic", bridge_sup_statistic(trace, b.component)},
           {"crossed", b.crossed},
           {"first_crossing", b.first_crossing ? json(*b.first_crossing) : json(nullptr)}};
    std::vector<double> lower, upper;
    for (double t : trace.grid) {
      lower.push_back(b.lower(t));
      upper.push_back(b.upper(t));
    }
    d["lower"] = lower;
    d["upper"] = upper;
    decisions.push_back(d);
  }
  j["decisions"] = decisions;
  return j;
}

}  // namespace

const char* library_version() { return SURVSCORE_VERSION; }

void write_trace_csv(std::ostream& out, const ScoreProcessTrace& trace,
                     const std::vector<ConfidenceBand>& bands) {
  const Eigen::Index p = trace.dimension();
  out << "t";
  for (Eigen::Index c = 1; c <= p; ++c) out << ",u" << c;
  if (trace.standardized())
    for (Eigen::Index c = 1; c <= p; ++c) out << ",s" << c;
  for (const ConfidenceBand& b : bands) out << ",lower_" << b.component + 1 << ",upper_" << b.component + 1;
  out << '\n' << std::setprecision(17);
  for (std::size_t j = 0; j < trace.grid.size(); ++j) {
    const auto row = static_cast<Eigen::Index>(j);
    const double t = trace.grid[j];
    out << t;
    for (Eigen::Index c = 0; c < p; ++c) out << ',' << trace.values(row, c);
    if (trace.standardized())
      for (Eigen::Index c = 0; c < p; ++c) out << ',' << (*trace.standardized_values)(row, c);
    for (const ConfidenceBand& b : bands) out << ',' << b.lower(t) << ',' << b.upper(t);
    out << '\n';
  }
}

std::string trace_json(const ScoreProcessTrace& trace, const std::vector<ConfidenceBand>& bands) {
  return dump(trace_to_json(trace, bands));
}

void conform_candidates(CandidateSet& set, Eigen::Index p) {
  const auto dim = static_cast<std::size_t>(p);
  for (Candidate& c : set.candidates) {
    if (c.components.size() > dim)
      throw InputError("candidate '" + c.name + "' references component " + std::to_string(c.components.size()) +
                       " but the data have " + std::to_string(dim) + " covariates");
    c.components.resize(dim);
  }
}

ComponentSpec parse_component(const std::string& text) { return component_from(parse(text, "component")); }

std::string candidate_set_json(const CandidateSet& set) {
  json list = json::array();
  for (const Candidate& c : set.candidates) list.push_back(candidate_json(c));
  return dump(json{{"candidates", list}});
}

CandidateSet parse_candidate_set(const std::string& text) {
  const json j = parse(text, "candidate set");
  try {
    return candidate_set_from(j);
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid candidate set: ") + e.what());
  }
}

TemporalEffect parse_effect(const std::string& text) {
  try {
    return effect_from(parse(text, "effect"));
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid effect: ") + e.what());
  }
}

std::string effect_json(const TemporalEffect& effect) { return dump(effect_to_json(effect)); }

SimulationScenario parse_scenario(const std::string& text) {
  const json j = parse(text, "scenario");
  if (!j.is_object()) throw InvalidScenario("scenario must be a JSON object");
  SimulationScenario sc;
  try {
    sc.n = get<std::size_t>(j, "n", sc.n);
    sc.true_effect = j.contains("true_effect") ? effect_from(j.at("true_effect")) : TemporalEffect::zero(1);
    sc.p = get<Eigen::Index>(j, "p", sc.true_effect.dimension());
    if (!j.contains("true_effect")) sc.true_effect = TemporalEffect::zero(sc.p);
    if (j.contains("covariates")) {
      const json& c = j.at("covariates");
      const std::string law = get<std::string>(c, "law", "bernoulli");
      if (law == "bernoulli") {
        sc.covariates = BernoulliLaw{get<double>(c, "q", 0.5)};
      } else if (law == "gaussian") {
        GaussianLaw g;
        g.covariance = c.contains("covariance") ? matrix_from(c.at("covariance"), "covariance")
                                                : Matrix::Identity(sc.p, sc.p);
        g.mean = c.contains("mean") ? vector_from(c.at("mean"), "mean") : Vector::Zero(g.covariance.rows());
        sc.covariates = g;
      } else {
        throw InvalidScenario("unknown covariate law '" + law + "'");
      }
    }
    sc.baseline = get<double>(j, "baseline", sc.baseline);
    sc.time_horizon = get<double>(j, "time_horizon", sc.time_horizon);
    if (j.contains("censoring")) {
      const json& c = j.at("censoring");
      const std::string type = c.is_string() ? c.get<std::string>() : get<std::string>(c, "type", "none");
      if (type == "none")
        sc.censoring = NoCensoring{};
      else if (type == "exponential")
        sc.censoring = ExponentialCensoring{require<double>(c, "rate")};
      else if (type == "administrative")
        sc.censoring = AdministrativeCensoring{require<double>(c, "cutoff")};
      else
        throw InvalidScenario("unknown censoring '" + type + "'");
    }
    const std::string gen = get<std::string>(j, "generator", "rank_conditional");
    if (gen == "rank_conditional")
      sc.generator = Generator::RankConditional;
    else if (gen == "absolute_time")
      sc.generator = Generator::AbsoluteTime;
    else
      throw InvalidScenario("unknown generator '" + gen + "'");
    sc.seed = get<std::uint64_t>(j, "seed", sc.seed);
  } catch (const json::exception& e) {
    throw InvalidScenario(std::string("invalid scenario: ") + e.what());
  }
  validate_scenario(sc);
  return sc;
}

std::string scenario_json(const SimulationScenario& scenario) { return dump(scenario_to_json(scenario)); }

std::vector<Analysis> parse_analyses(const std::string& text) {
  const json j = parse(text, "analyses");
  const json& list = j.is_object() ? j.at("analyses") : j;
  if (!list.is_array()) throw InputError("analyses must be an array");
  std::vector<Analysis> out;
  try {
    for (std::size_t i = 0; i < list.size(); ++i) {
      const json& a = list[i];
      const std::string type = a.is_string() ? a.get<std::string>() : require<std::string>(a, "type");
      if (type == "band") {
        BandAnalysis b;
        if (a.is_object()) b.alphas = get<std::vector<double>>(a, "alphas", b.alphas);
        for (double alpha : b.alphas)
          if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("band alpha must lie in (0, 1)");
        out.emplace_back(b);
      } else if (type == "fit") {
        out.emplace_back(FitAnalysis{candidate_from(a, i)});
      } else if (type == "select") {
        out.emplace_back(SelectAnalysis{candidate_set_from(a.at("candidates"))});
      } else if (type == "drift") {
        DriftAnalysis d;
        if (a.is_object()) d.times = get<std::vector<double>>(a, "times", d.times);
        out.emplace_back(d);
      } else {
        throw InputError("unknown analysis '" + type + "'");
      }
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid analyses: ") + e.what());
  }
  return out;
}

std::string fit_json(const std::string& name, const FitResult& fit) {
  json j;
  j["name"] = name;
  j["effect"] = effect_to_json(fit.effect);
  j["describe"] = fit.effect.describe();
  j["loglik"] = fit.loglik;
  j["loglik_null"] = fit.loglik_null;
  j["iterations"] = fit.iterations;
  j["converged"] = fit.converged;
  j["score_norm"] = fit.score_norm;
  j["r2"] = fit.r2.value;
  j["r2_numerator"] = fit.r2.numerator;
  j["r2_denominator"] = fit.r2.denominator;
  j["information"] = matrix_json(fit.information);
  return dump(j);
}

std::string selection_json(const Selection& selection) {
  json ranking = json::array();
  for (const RankedFit& r : selection.ranking) {
    json f = json::parse(fit_json(r.name, r.fit));
    f["index"] = r.index;
    ranking.push_back(f);
  }
  json failures = json::array();
  for (const CandidateFailure& f : selection.failures)
    failures.push_back(json{{"index", f.index}, {"name", f.name}, {"reason", f.reason}});
  return dump(json{{"version", library_version()}, {"ranking", ranking}, {"failures", failures}});
}

void write_ranking_csv(std::ostream& out, const Selection& selection) {
  const Eigen::Index p = selection.ranking.empty() ? 0 : selection.ranking.front().fit.effect.dimension();
  out << "rank,candidate";
  for (Eigen::Index c = 1; c <= p; ++c) out << ",beta0_" << c;
  out << ",r2,loglik,converged,status\n" << std::setprecision(17);
  std::size_t rank = 1;
  for (const RankedFit& r : selection.ranking) {
    out << rank++ << ',' << csv_field(r.name);
    for (Eigen::Index c = 0; c < p; ++c) out << ',' << r.fit.effect.loadings()(c);
    out << ',' << r.fit.r2.value << ',' << r.fit.loglik << ',' << (r.fit.converged ? "true" : "false") << ",ok\n";
  }
  for (const CandidateFailure& f : selection.failures) {
    out << ',' << csv_field(f.name);
    for (Eigen::Index c = 0; c < p; ++c) out << ',';
    out << ",,,," << csv_field("failed: " + f.reason) << '\n';
  }
}

void write_dataset_csv(std::ostream& out, const SurvivalDataset& data) {
  if (!data.has_fixed_covariates()) throw InputError("only fixed covariates can be written as CSV");
  out << "id,time,status";
  for (Eigen::Index c = 1; c <= data.dimension; ++c) out << ",z" << c;
  out << '\n' << std::setprecision(17);
  for (const Subject& s : data.subjects) {
    out << csv_field(s.id) << ',' << s.observed_time << ',' << s.status;
    for (Eigen::Index c = 0; c < data.dimension; ++c) out << ',' << s.covariates.fixed_value()(c);
    out << '\n';
  }
}

std::string report_json(const ReplicationReport& report) {
  json j;
  j["version"] = library_version();
  j["scenario"] = scenario_to_json(report.scenario);
  json analyses = json::array();
  for (const Analysis& a : report.analyses) analyses.push_back(analysis_to_json(a));
  j["analyses"] = analyses;
  j["summary"] = summary_json(report);
  json records = json::array();
  for (const ReplicationRecord& r : report.records) {
    json rec{{"replicate", r.replicate}, {"seed", r.seed}, {"failures", r.failures}, {"k_n", r.k_n}};
    if (!r.error.empty()) rec["error"] = r.error;
    if (r.band)
      rec["band"] = json{{"sup_statistic", r.band->sup_statistic}, {"rejected", r.band->rejected}};
    if (!r.fits.empty()) {
      json f = json::array();
      for (const auto& fit : r.fits) f.push_back(fit_record_json(fit));
      rec["fits"] = f;
    }
    if (r.selection) {
      json f = json::array();
      for (const auto& fit : r.selection->fits) f.push_back(fit_record_json(fit));
      rec["selection"] = json{{"ranking", r.selection->ranking}, {"fits", f}};
      if (!r.selection->error.empty()) rec["selection"]["error"] = r.selection->error;
    }
    if (r.drift)
      rec["drift"] = json{{"times", r.drift->times},
                          {"standardized", matrix_json(r.drift->standardized)},
                          {"expected", matrix_json(r.drift->expected)}};
    records.push_back(rec);
  }
  j["records"] = records;
  return dump(j);
}

void write_report_csv(std::ostream& out, const ReplicationReport& report) {
  out << "replicate,seed,analysis,name,component,key,value\n" << std::setprecision(17);
  auto row = [&](const ReplicationRecord& r, const char* analysis, const std::string& name,
                 long component, const std::string& key, double value) {
    out << r.replicate << ',' << r.seed << ',' << analysis << ',' << name << ',';
    if (component > 0) out << component;
    out << ',' << key << ',' << value << '\n';
  };
  auto fit_rows = [&](const ReplicationRecord& r, const char* analysis, const FitRecord& f) {
    if (!f.error.empty()) {
      row(r, analysis, f.name, 0, "failed", 1.0);
      return;
    }
    row(r, analysis, f.name, 0, "r2", f.r2);
    row(r, analysis, f.name, 0, "loglik", f.loglik);
    for (Eigen::Index c = 0; c < f.loadings.size(); ++c) row(r, analysis, f.name, c + 1, "loading", f.loadings(c));
  };
  for (const ReplicationRecord& r : report.records) {
    row(r, "data", "", 0, "failures", static_cast<double>(r.failures));
    row(r, "data", "", 0, "k_n", static_cast<double>(r.k_n));
    if (!r.error.empty()) row(r, "data", "", 0, "failed", 1.0);
    if (r.band) {
      for (std::size_t c = 0; c < r.band->sup_statistic.size(); ++c)
        row(r, "band", "", static_cast<long>(c + 1), "sup_statistic", r.band->sup_statistic[c]);
      for (const Analysis& a : report.analyses) {
        const auto* band = std::get_if<BandAnalysis>(&a);
        if (!band) continue;
        for (std::size_t k = 0; k < band->alphas.size(); ++k) {
          std::ostringstream key;
          key << "rejected_" << band->alphas[k];
          for (std::size_t c = 0; c < r.band->rejected[k].size(); ++c)
            row(r, "band", "", static_cast<long>(c + 1), key.str(), r.band->rejected[k][c] ? 1.0 : 0.0);
        }
      }
    }
    for (const FitRecord& f : r.fits) fit_rows(r, "fit", f);
    if (r.selection) {
      for (const FitRecord& f : r.selection->fits) fit_rows(r, "select", f);
      if (!r.selection->ranking.empty()) {
        for (std::size_t i = 0; i < r.selection->ranking.size(); ++i)
          row(r, "select", r.selection->ranking[i], 0, "rank", static_cast<double>(i + 1));
      }
    }
    if (r.drift) {
      for (std::size_t t = 0; t < r.drift->times.size(); ++t) {
        std::ostringstream key;
        key << "t=" << r.drift->times[t];
        for (Eigen::Index c = 0; c < r.drift->standardized.cols(); ++c) {
          row(r, "drift", "observed", c + 1, key.str(), r.drift->standardized(static_cast<Eigen::Index>(t), c));
          row(r, "drift", "expected", c + 1, key.str(), r.drift->expected(static_cast<Eigen::Index>(t), c));
        }
      }
    }
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace survscore::io

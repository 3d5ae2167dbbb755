#include "survscore/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <string>
#include <thread>

#include "survscore/errors.hpp"
#include "survscore/kolmogorov.hpp"
#include "survscore/rng.hpp"
#include "survscore/score_process.hpp"

namespace survscore {

namespace {

bool effect_is_constant(const TemporalEffect& effect) {
  for (Eigen::Index j = 0; j < effect.dimension(); ++j)
    if (effect.loadings()(j) != 0.0 && !is_constant_basis(effect.shapes()[static_cast<std::size_t>(j)]))
      return false;
  return true;
}

Matrix draw_covariates(const SimulationScenario& sc, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(sc.n);
  Matrix z(n, sc.p);
  if (const auto* b = std::get_if<BernoulliLaw>(&sc.covariates)) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < sc.p; ++j) z(i, j) = rng.bernoulli(b->q) ? 1.0 : 0.0;
    return z;
  }
  const auto& g = std::get<GaussianLaw>(sc.covariates);
  const Matrix root = sym_matrix_power(g.covariance, MatrixPower::Sqrt);
  Vector e(sc.p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < sc.p; ++j) e(j) = rng.normal();
    z.row(i) = (g.mean + root * e).transpose();
  }
  return z;
}

// Fenwick tree over nonnegative weights with proportional sampling.
class WeightTree {
 public:
  explicit WeightTree(std::size_t n) : tree_(n + 1, 0.0), weights_(n, 0.0) {
    top_ = 1;
    while (top_ * 2 <= n) top_ *= 2;
  }

  void assign(const std::vector<double>& w) {
    weights_ = w;
    std::fill(tree_.begin(), tree_.end(), 0.0);
    for (std::size_t i = 1; i < tree_.size(); ++i) {
      tree_[i] += weights_[i - 1];
      const std::size_t parent = i + (i & (~i + 1));
      if (parent < tree_.size()) tree_[parent] += tree_[i];
    }
  }

  void remove(std::size_t i) {
    const double w = weights_[i];
    weights_[i] = 0.0;
    for (std::size_t j = i + 1; j < tree_.size(); j += j & (~j + 1)) tree_[j] -= w;
  }

  double total() const {
    double s = 0.0;
    for (std::size_t j = tree_.size() - 1; j > 0; j -= j & (~j + 1)) s += tree_[j];
    return s;
  }

  // Smallest index whose prefix sum exceeds target; skips zero weights.
  std::size_t find(double target) const {
    std::size_t pos = 0;
    for (std::size_t step = top_; step > 0; step /= 2) {
      const std::size_t next = pos + step;
      if (next < tree_.size() && tree_[next] <= target) {
        pos = next;
        target -= tree_[next];
      }
    }
    std::size_t i = std::min(pos, weights_.size() - 1);
    // Rounding can land on a removed entry; move to the nearest live one.
    if (weights_[i] <= 0.0) {
      std::size_t up = i;
      while (up < weights_.size() && weights_[up] <= 0.0) ++up;
      if (up < weights_.size()) return up;
      while (i > 0 && weights_[i] <= 0.0) --i;
    }
    return i;
  }

 private:
  std::vector<double> tree_;
  std::vector<double> weights_;
  std::size_t top_ = 1;
};

// Event order: 1 = failure, 0 = censoring, decided before the subjects.
struct EventPlan {
  std::vector<int> kinds;  // one per observed event
  std::size_t observed = 0;
  std::size_t informative = 0;  // failures whose risk set has >= 2 subjects
};

EventPlan plan_events(const SimulationScenario& sc, Rng& rng) {
  EventPlan plan;
  const std::size_t n = sc.n;
  plan.observed = n;
  if (const auto* a = std::get_if<AdministrativeCensoring>(&sc.censoring)) {
    const double last = std::floor(a->cutoff * static_cast<double>(n) + 1e-9);
    plan.observed = static_cast<std::size_t>(std::clamp(last, 0.0, static_cast<double>(n)));
  }
  double censor_prob = 0.0;
  if (const auto* e = std::get_if<ExponentialCensoring>(&sc.censoring))
    censor_prob = e->rate / (1.0 + e->rate);
  plan.kinds.resize(plan.observed);
  for (std::size_t e = 0; e < plan.observed; ++e) {
    plan.kinds[e] = (censor_prob > 0.0 && rng.uniform() < censor_prob) ? 0 : 1;
    if (plan.kinds[e] == 1 && n - e >= 2) ++plan.informative;
  }
  return plan;
}

SurvivalDataset rank_conditional(const SimulationScenario& sc, Rng& rng) {
  const Matrix z = draw_covariates(sc, rng);
  const EventPlan plan = plan_events(sc, rng);
  const std::size_t n = sc.n;
  const double k = static_cast<double>(std::max<std::size_t>(plan.informative, 1));

  std::vector<double> times(n, 0.0);
  std::vector<int> status(n, 0);

  // Live subjects for uniform censoring draws.
  std::vector<std::size_t> live(n);
  std::vector<std::size_t> where(n);
  for (std::size_t i = 0; i < n; ++i) live[i] = where[i] = i;
  auto drop = [&](std::size_t s) {
    const std::size_t at = where[s];
    live[at] = live.back();
    where[live[at]] = at;
    live.pop_back();
  };

  // Discrete covariates: sample the failing row group, then a member.
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::size_t> group_of(n), slot(n);
  Matrix group_rows;
  {
    std::map<std::vector<double>, std::size_t> index;
    std::vector<double> key(static_cast<std::size_t>(sc.p));
    for (std::size_t i = 0; i < n && index.size() <= 64; ++i) {
      for (Eigen::Index j = 0; j < sc.p; ++j) key[static_cast<std::size_t>(j)] = z(static_cast<Eigen::Index>(i), j);
      auto [it, inserted] = index.emplace(key, index.size());
      if (inserted) members.emplace_back();
      group_of[i] = it->second;
      slot[i] = members[it->second].size();
      members[it->second].push_back(i);
    }
    if (index.size() > 64) {
      members.clear();
    } else {
      group_rows.resize(static_cast<Eigen::Index>(index.size()), sc.p);
      for (const auto& [k, g] : index)
        for (Eigen::Index j = 0; j < sc.p; ++j) group_rows(static_cast<Eigen::Index>(g), j) = k[static_cast<std::size_t>(j)];
    }
  }
  const bool grouped = !members.empty();

  WeightTree tree(grouped ? 1 : n);
  Vector current_beta;
  Vector group_eta;
  std::vector<double> w(grouped ? 0 : n);
  std::size_t failures = 0;

  auto pick_group_member = [&]() {
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t g = 0; g < members.size(); ++g)
      if (!members[g].empty()) top = std::max(top, group_eta(static_cast<Eigen::Index>(g)));
    double total = 0.0;
    std::vector<double> gw(members.size(), 0.0);
    for (std::size_t g = 0; g < members.size(); ++g) {
      if (members[g].empty()) continue;
      gw[g] = static_cast<double>(members[g].size()) * std::exp(group_eta(static_cast<Eigen::Index>(g)) - top);
      total += gw[g];
    }
    double u = rng.uniform() * total;
    std::size_t g = 0;
    for (; g + 1 < members.size(); ++g) {
      if (u < gw[g]) break;
      u -= gw[g];
    }
    while (members[g].empty()) g = (g == 0) ? members.size() - 1 : g - 1;
    return members[g][rng.below(members[g].size())];
  };

  for (std::size_t e = 0; e < plan.observed; ++e) {
    const double time = static_cast<double>(e + 1) / static_cast<double>(n);
    std::size_t chosen = 0;
    if (plan.kinds[e] == 0) {
      chosen = live[rng.below(live.size())];
    } else {
      const double t = std::min(1.0, static_cast<double>(failures + 1) / k);
      Vector beta = sc.true_effect(t);
      const bool changed = current_beta.size() == 0 || beta != current_beta;
      if (changed) current_beta = beta;
      if (grouped) {
        if (changed) group_eta = group_rows * beta;
        chosen = pick_group_member();
      } else {
        if (changed) {
          const Vector eta = z * beta;
          double top = -std::numeric_limits<double>::infinity();
          for (std::size_t s : live) top = std::max(top, eta(static_cast<Eigen::Index>(s)));
          std::fill(w.begin(), w.end(), 0.0);
          for (std::size_t s : live) w[s] = std::exp(eta(static_cast<Eigen::Index>(s)) - top);
          tree.assign(w);
        }
        chosen = tree.find(rng.uniform() * tree.total());
      }
      ++failures;
    }
    times[chosen] = time;
    status[chosen] = plan.kinds[e];
    if (grouped) {
      auto& list = members[group_of[chosen]];
      const std::size_t at = slot[chosen];
      list[at] = list.back();
      slot[list[at]] = at;
      list.pop_back();
    } else {
      tree.remove(chosen);
    }
    drop(chosen);
  }
  // Administrative cutoff: whoever is left is censored at the cutoff.
  if (!live.empty()) {
    const double cutoff = std::get<AdministrativeCensoring>(sc.censoring).cutoff;
    for (std::size_t s : live) times[s] = cutoff;
  }
  return make_dataset(times, status, z);
}

SurvivalDataset absolute_time(const SimulationScenario& sc, Rng& rng) {
  const Matrix z = draw_covariates(sc, rng);
  const std::size_t n = sc.n;
  const bool constant = effect_is_constant(sc.true_effect);

  // Piecewise-constant hazard on cells of [0, horizon]; constant beyond.
  constexpr int cells = 512;
  std::vector<Vector> cell_beta;
  if (!constant) {
    cell_beta.reserve(cells);
    for (int m = 0; m < cells; ++m) cell_beta.push_back(sc.true_effect((m + 0.5) / cells));
  }
  const Vector beta_end = sc.true_effect(1.0);

  std::vector<double> times(n);
  std::vector<int> status(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector zi = z.row(static_cast<Eigen::Index>(i)).transpose();
    double target = rng.exponential(1.0) / sc.baseline;
    double t = 0.0;
    if (constant) {
      t = target / std::exp(beta_end.dot(zi));
    } else {
      const double width = sc.time_horizon / cells;
      bool found = false;
      for (int m = 0; m < cells; ++m) {
        const double rate = std::exp(cell_beta[static_cast<std::size_t>(m)].dot(zi));
        if (rate * width >= target) {
          t = m * width + target / rate;
          found = true;
          break;
        }
        target -= rate * width;
      }
      if (!found) t = sc.time_horizon + target / std::exp(beta_end.dot(zi));
    }
    times[i] = t;
  }

  if (const auto* e = std::get_if<ExponentialCensoring>(&sc.censoring)) {
    for (std::size_t i = 0; i < n; ++i) {
      const double c = rng.exponential(e->rate);
      if (c < times[i]) {
        times[i] = c;
        status[i] = 0;
      }
    }
  } else if (const auto* a = std::get_if<AdministrativeCensoring>(&sc.censoring)) {
    for (std::size_t i = 0; i < n; ++i) {
      if (times[i] > a->cutoff) {
        times[i] = a->cutoff;
        status[i] = 0;
      }
    }
  }
  return make_dataset(times, status, z);
}

FitRecord to_record(const std::string& name, const FitResult& fit) {
  FitRecord r;
  r.name = name;
  r.loadings = fit.effect.loadings();
  for (const Basis& b : fit.effect.shapes()) r.shapes.push_back(describe_basis(b));
  r.r2 = fit.r2.value;
  r.loglik = fit.loglik;
  r.converged = fit.converged;
  return r;
}

}  // namespace

void validate_scenario(const SimulationScenario& sc) {
  if (sc.n < 2) throw InvalidScenario("n must be at least 2");
  if (sc.p < 1) throw InvalidScenario("p must be at least 1");
  if (sc.true_effect.dimension() != sc.p)
    throw InvalidScenario("true effect dimension does not match p");
  for (double v : {0.0, 0.5, 1.0}) {
    if (!sc.true_effect(v).allFinite()) throw InvalidScenario("true effect is not finite");
  }
  if (const auto* b = std::get_if<BernoulliLaw>(&sc.covariates)) {
    if (!(b->q > 0.0 && b->q < 1.0)) throw InvalidScenario("bernoulli q must lie in (0, 1)");
  } else {
    const auto& g = std::get<GaussianLaw>(sc.covariates);
    if (g.mean.size() != sc.p || g.covariance.rows() != sc.p || g.covariance.cols() != sc.p)
      throw InvalidScenario("gaussian law dimensions do not match p");
    if (!g.mean.allFinite() || !g.covariance.allFinite())
      throw InvalidScenario("gaussian law is not finite");
    if ((g.covariance - g.covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw InvalidScenario("covariance matrix is not symmetric");
    if (jacobi_eigen(g.covariance).values(0) < -1e-10)
      throw InvalidScenario("covariance matrix is not positive semidefinite");
  }
  if (!(sc.baseline > 0.0) || !std::isfinite(sc.baseline))
    throw InvalidScenario("baseline hazard must be positive");
  if (const auto* e = std::get_if<ExponentialCensoring>(&sc.censoring)) {
    if (!(e->rate > 0.0) || !std::isfinite(e->rate))
      throw InvalidScenario("censoring rate must be positive");
  }
  if (const auto* a = std::get_if<AdministrativeCensoring>(&sc.censoring)) {
    if (!(a->cutoff > 0.0) || !std::isfinite(a->cutoff))
      throw InvalidScenario("administrative cutoff must be positive");
    if (sc.generator == Generator::RankConditional && a->cutoff > 1.0)
      throw InvalidScenario("rank-conditional cutoff must lie in (0, 1]");
  }
  if (sc.generator == Generator::AbsoluteTime && !effect_is_constant(sc.true_effect) &&
      !(sc.time_horizon > 0.0))
    throw InvalidScenario("absolute-time generator needs a time_horizon for a non-constant effect");
}

SurvivalDataset simulate_dataset(const SimulationScenario& scenario) {
  validate_scenario(scenario);
  Rng rng(scenario.seed);
  return scenario.generator == Generator::RankConditional ? rank_conditional(scenario, rng)
                                                          : absolute_time(scenario, rng);
}

std::uint64_t replicate_seed(std::uint64_t seed, std::size_t replicate) {
  return mix64(seed, static_cast<std::uint64_t>(replicate));
}

ReplicationRecord analyse_dataset(const SurvivalDataset& data, const SimulationScenario& scenario,
                                  const std::vector<Analysis>& analyses) {
  ReplicationRecord rec;
  for (const Subject& s : data.subjects) rec.failures += s.status == 1 ? 1 : 0;
  try {
    const TransformedDataset td = time_transform(data);
    rec.k_n = td.k_n();
    std::optional<ScoreProcessTrace> trace;
    auto null_trace = [&]() -> const ScoreProcessTrace& {
      if (!trace) trace = score_process(td, Vector::Zero(td.dimension()));
      return *trace;
    };

    for (const Analysis& analysis : analyses) {
      if (const auto* band = std::get_if<BandAnalysis>(&analysis)) {
        const ScoreProcessTrace& tr = null_trace();
        BandRecord br;
        for (Eigen::Index c = 0; c < tr.dimension(); ++c)
          br.sup_statistic.push_back(bridge_sup_statistic(tr, c));
        for (double alpha : band->alphas) {
          const double a = kolmogorov_quantile(alpha);
          std::vector<bool> rejected;
          for (double s : br.sup_statistic) rejected.push_back(s > a);
          br.rejected.push_back(std::move(rejected));
        }
        rec.band = std::move(br);
      } else if (const auto* fit = std::get_if<FitAnalysis>(&analysis)) {
        try {
          const bool needs = std::any_of(fit->model.components.begin(), fit->model.components.end(),
                                         [](const ComponentSpec& s) { return s.auto_ratio; });
          const std::vector<Basis> shapes = resolve_candidate(fit->model, needs ? &null_trace() : nullptr);
          rec.fits.push_back(to_record(fit->model.name, fit_partial_likelihood(td, shapes)));
        } catch (const Error& e) {
          FitRecord r;
          r.name = fit->model.name;
          r.error = e.what();
          rec.fits.push_back(std::move(r));
        }
      } else if (const auto* sel = std::get_if<SelectAnalysis>(&analysis)) {
        SelectRecord sr;
        sr.fits.resize(sel->candidates.candidates.size());
        for (std::size_t c = 0; c < sr.fits.size(); ++c)
          sr.fits[c].name = sel->candidates.candidates[c].name;
        try {
          const Selection s = select_effect(td, sel->candidates);
          for (const RankedFit& r : s.ranking) {
            sr.ranking.push_back(r.name);
            sr.fits[r.index] = to_record(r.name, r.fit);
          }
          for (const CandidateFailure& f : s.failures) sr.fits[f.index].error = f.reason;
        } catch (const Error& e) {
          sr.error = e.what();
        }
        rec.selection = std::move(sr);
      } else if (const auto* drift = std::get_if<DriftAnalysis>(&analysis)) {
        const ScoreProcessTrace& tr = null_trace();
        if (!tr.standardized()) throw SingularMatrix("Sigma-hat is singular");
        DriftRecord dr;
        dr.times = drift->times;
        const auto m = static_cast<Eigen::Index>(drift->times.size());
        dr.standardized.resize(m, tr.dimension());
        dr.expected.resize(m, tr.dimension());
        const double root_k = std::sqrt(static_cast<double>(tr.k_n()));
        for (Eigen::Index j = 0; j < m; ++j) {
          const double t = drift->times[static_cast<std::size_t>(j)];
          dr.standardized.row(j) = tr.standardized_at(t).transpose();
          dr.expected.row(j) = (root_k * scenario.true_effect.integral(t)).transpose();
        }
        rec.drift = std::move(dr);
      }
    }
  } catch (const Error& e) {
    rec.error = e.what();
  }
  return rec;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("SURVSCORE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

ReplicationReport run_replications(const SimulationScenario& scenario, std::size_t replicates,
                                   const std::vector<Analysis>& analyses, unsigned threads) {
  if (replicates < 1) throw InvalidScenario("at least one replicate required");
  validate_scenario(scenario);

  ReplicationReport report;
  report.scenario = scenario;
  report.analyses = analyses;
  report.records.resize(replicates);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t r = next++; r < replicates; r = next++) {
      SimulationScenario sc = scenario;
      sc.seed = replicate_seed(scenario.seed, r);
      ReplicationRecord rec;
      try {
        rec = analyse_dataset(simulate_dataset(sc), sc, analyses);
      } catch (const Error& e) {
        rec.error = e.what();
      }
      rec.replicate = r;
      rec.seed = sc.seed;
      report.records[r] = std::move(rec);
    }
  };

  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, replicates));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return report;
}

MeanSe mean_se(const std::vector<double>& values) {
  MeanSe out;
  out.count = values.size();
  if (values.empty()) return out;
  double s = 0.0;
  for (double v : values) s += v;
  out.mean = s / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()));
  }
  return out;
}

}  // namespace survscore

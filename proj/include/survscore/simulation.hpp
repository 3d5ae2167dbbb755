#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "survscore/effect.hpp"
#include "survscore/model_fit.hpp"
#include "survscore/survival.hpp"

namespace survscore {

struct BernoulliLaw {
  double q = 0.5;  // each component independent Bernoulli(q)
};

struct GaussianLaw {
  Vector mean;
  Matrix covariance;
};

using CovariateLaw = std::variant<BernoulliLaw, GaussianLaw>;

struct NoCensoring {};
struct ExponentialCensoring {
  double rate = 1.0;
};
struct AdministrativeCensoring {
  double cutoff = 1.0;
};
using Censoring = std::variant<NoCensoring, ExponentialCensoring, AdministrativeCensoring>;

enum class Generator {
  // Failure times drawn from the hazard baseline * exp(beta(s)^T Z) on the
  // original scale, with s = min(time / time_horizon, 1).
  AbsoluteTime,
  // Failure order drawn sequentially with the risk-set probabilities at the
  // current rank time; competing exponential clocks supply the times.
  RankConditional,
};

struct SimulationScenario {
  std::size_t n = 200;
  Eigen::Index p = 1;
  CovariateLaw covariates = BernoulliLaw{};
  TemporalEffect true_effect = TemporalEffect::zero(1);
  double baseline = 1.0;
  double time_horizon = 0.0;  // absolute_time with a non-constant effect only
  Censoring censoring = NoCensoring{};
  Generator generator = Generator::RankConditional;
  std::uint64_t seed = 1;
};

/// Throws InvalidScenario.
void validate_scenario(const SimulationScenario& scenario);

/// Draws one dataset using `scenario.seed`.
SurvivalDataset simulate_dataset(const SimulationScenario& scenario);

// Analyses run on every replicate.
struct BandAnalysis {
  std::vector<double> alphas{0.05};
};
struct FitAnalysis {
  Candidate model;
};
struct SelectAnalysis {
  CandidateSet candidates;
};
struct DriftAnalysis {
  std::vector<double> times{0.25, 0.5, 0.75, 1.0};
};
using Analysis = std::variant<BandAnalysis, FitAnalysis, SelectAnalysis, DriftAnalysis>;

struct BandRecord {
  std::vector<double> sup_statistic;       // per component
  std::vector<std::vector<bool>> rejected;  // [alpha][component]
};

struct FitRecord {
  std::string name;
  std::string error;  // empty on success
  Vector loadings;
  std::vector<std::string> shapes;
  double r2 = 0.0;
  double loglik = 0.0;
  bool converged = false;
};

struct SelectRecord {
  std::string error;
  std::vector<std::string> ranking;  // candidate names, best first
  std::vector<FitRecord> fits;       // declaration order
};

struct DriftRecord {
  std::vector<double> times;
  Matrix standardized;  // rows: times, cols: components
  Matrix expected;      // sqrt(k_n) * int_0^t beta(s) ds
};

struct ReplicationRecord {
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  std::size_t failures = 0;
  std::size_t k_n = 0;
  std::string error;  // dataset-level failure
  std::optional<BandRecord> band;
  std::vector<FitRecord> fits;
  std::optional<SelectRecord> selection;
  std::optional<DriftRecord> drift;
};

struct ReplicationReport {
  SimulationScenario scenario;
  std::vector<Analysis> analyses;
  std::vector<ReplicationRecord> records;
};

/// Seed of replicate r.
std::uint64_t replicate_seed(std::uint64_t seed, std::size_t replicate);

/// Runs the analyses on `replicates` independent datasets. Replicate r uses
/// replicate_seed(scenario.seed, r); results do not depend on `threads`
/// (0 = SURVSCORE_THREADS or the hardware concurrency).
ReplicationReport run_replications(const SimulationScenario& scenario, std::size_t replicates,
                                   const std::vector<Analysis>& analyses, unsigned threads = 0);

/// Analyses of one dataset, as recorded by run_replications.
ReplicationRecord analyse_dataset(const SurvivalDataset& data, const SimulationScenario& scenario,
                                  const std::vector<Analysis>& analyses);

/// Summary statistics over records.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  std::size_t count = 0;
};
MeanSe mean_se(const std::vector<double>& values);

/// Threads to use when the caller passes 0.
unsigned default_thread_count();

}  // namespace survscore

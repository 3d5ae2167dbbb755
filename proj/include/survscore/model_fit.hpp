#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "survscore/effect.hpp"
#include "survscore/predictive.hpp"
#include "survscore/score_process.hpp"
#include "survscore/survival.hpp"

namespace survscore {

struct FitOptions {
  int max_iterations = 100;
  int max_halvings = 20;
  double divergence_bound = 50.0;  // ||beta0|| beyond this signals separation
};

struct FitResult {
  TemporalEffect effect;  // estimated loadings on the fitted shapes
  double loglik = 0.0;
  double loglik_null = 0.0;  // at zero loadings
  int iterations = 0;
  bool converged = false;
  R2Result r2;
  double score_norm = 0.0;
  Vector score;
  Matrix information;
};

/// Value, gradient and observed information of the log partial likelihood
/// in the loadings, over the k_n informative failures.
struct PartialLikelihood {
  double value = 0.0;
  Vector score;
  Matrix information;
};

PartialLikelihood log_partial_likelihood(const TransformedDataset& data,
                                         const TemporalEffect& effect);

/// Newton-Raphson with step halving, started at zero loadings. Fitting
/// loadings on shapes B is a constant-coefficient fit on W_j(t) = B_j(t) Z_j(t).
/// Throws Nonconvergence, MonotoneLikelihood or SingularInformation.
FitResult fit_partial_likelihood(const TransformedDataset& data, const std::vector<Basis>& shapes,
                                 const FitOptions& options = {});

/// Ratio of the least-squares slope of the standardized process on (t0, 1]
/// over its slope on [0, t0]. Throws DegenerateSegment.
double slope_ratio_changepoint(const ScoreProcessTrace& trace, Eigen::Index component, double t0);

/// One component of a candidate. A changepoint with `auto_ratio` takes its
/// ratio from slope_ratio_changepoint on the process at zero.
struct ComponentSpec {
  Basis basis = basis::Constant{};
  bool auto_ratio = false;
};

struct Candidate {
  std::string name;
  std::vector<ComponentSpec> components;  // one per covariate
};

struct CandidateSet {
  std::vector<Candidate> candidates;
};

/// Shapes of a candidate with automatic ratios filled in from `trace`.
std::vector<Basis> resolve_candidate(const Candidate& candidate, const ScoreProcessTrace* trace);

struct RankedFit {
  std::size_t index = 0;  // position in the candidate set
  std::string name;
  FitResult fit;
};

struct CandidateFailure {
  std::size_t index = 0;
  std::string name;
  std::string reason;
};

struct Selection {
  std::vector<RankedFit> ranking;  // by R^2 descending, ties by declaration order
  std::vector<CandidateFailure> failures;
  const RankedFit& best() const { return ranking.front(); }
};

/// Fits every candidate and ranks by R^2. Throws AllCandidatesFailed.
Selection select_effect(const TransformedDataset& data, const CandidateSet& candidates,
                        const FitOptions& options = {});

}  // namespace survscore

#include "survscore/model_fit.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "survscore/errors.hpp"
#include "survscore/moments.hpp"

namespace survscore {

PartialLikelihood log_partial_likelihood(const TransformedDataset& data,
                                         const TemporalEffect& effect) {
  const std::size_t k = data.k_n();
  const Eigen::Index p = data.dimension();
  if (effect.dimension() != p) throw DomainError("effect dimension does not match the dataset");

  std::vector<Vector> betas;
  std::vector<Vector> shapes;
  betas.reserve(k);
  shapes.reserve(k);
  for (const auto& g : data.grid()) {
    shapes.push_back(effect.shape_at(g.t));
    betas.push_back(effect(g.t));
  }
  const std::vector<WeightedMoments> moments = sweep_grid_moments(data, betas);

  PartialLikelihood out{0.0, Vector::Zero(p), Matrix::Zero(p, p)};
  for (std::size_t i = 0; i < k; ++i) {
    const Vector z = failing_covariate(data, i);
    const WeightedMoments& wm = moments[i];
    out.value += betas[i].dot(z) - wm.log_normalizer;
    out.score += shapes[i].cwiseProduct(z - wm.mean);
    out.information += shapes[i].asDiagonal() * wm.cov * shapes[i].asDiagonal();
  }
  return out;
}

FitResult fit_partial_likelihood(const TransformedDataset& data, const std::vector<Basis>& shapes,
                                 const FitOptions& options) {
  const Eigen::Index p = data.dimension();
  if (static_cast<Eigen::Index>(shapes.size()) != p)
    throw DomainError("one basis per covariate required");
  if (data.k_n() < static_cast<std::size_t>(p))
    throw DegenerateData("fewer informative failures than covariates");

  TemporalEffect effect(Vector::Zero(p), shapes);
  PartialLikelihood cur = log_partial_likelihood(data, effect);

  FitResult out;
  out.loglik_null = cur.value;
  auto tolerance = [](const Vector& b) { return 1e-8 * (1.0 + b.norm()); };

  // Converged when the score vanishes and the Newton step is small. Under
  // separation the score decays but the step does not.
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    const Vector& beta = effect.loadings();
    if (!is_positive_definite(cur.information)) {
      if (iter == 0) throw SingularInformation("observed information is rank-deficient");
      throw MonotoneLikelihood("observed information vanishes along a diverging path");
    }
    const Vector step = cur.information.ldlt().solve(cur.score);
    if (cur.score.norm() < tolerance(beta) && step.norm() < 1e-4 * (1.0 + beta.norm())) {
      out.converged = true;
      break;
    }
    if (beta.norm() > options.divergence_bound)
      throw MonotoneLikelihood("log partial likelihood is monotone: loadings diverge");

    bool accepted = false;
    double scale = 1.0;
    for (int h = 0; h <= options.max_halvings; ++h, scale *= 0.5) {
      TemporalEffect trial = effect.with_loadings(beta + scale * step);
      PartialLikelihood next = log_partial_likelihood(data, trial);
      if (std::isfinite(next.value) && next.value >= cur.value - 1e-12 * (1.0 + std::abs(cur.value))) {
        effect = std::move(trial);
        cur = std::move(next);
        accepted = true;
        break;
      }
    }
    if (!accepted) throw Nonconvergence("step halving failed to increase the partial likelihood");
  }
  if (!out.converged)
    throw Nonconvergence("Newton-Raphson did not converge in " +
                         std::to_string(options.max_iterations) + " iterations");

  out.effect = effect;
  out.loglik = cur.value;
  out.iterations = iter;
  out.score = cur.score;
  out.score_norm = cur.score.norm();
  out.information = cur.information;
  out.r2 = r_squared(data, out.effect);
  return out;
}

double slope_ratio_changepoint(const ScoreProcessTrace& trace, Eigen::Index component, double t0) {
  if (!trace.standardized()) throw SingularMatrix("trace has no standardized values");
  if (component < 0 || component >= trace.dimension())
    throw DomainError("component index out of range");
  if (!(t0 > 0.0 && t0 < 1.0)) throw DomainError("changepoint must lie in (0, 1)");

  const Matrix& s = *trace.standardized_values;
  auto ols_slope = [&](bool before) {
    double n = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t j = 0; j < trace.grid.size(); ++j) {
      const double t = trace.grid[j];
      if ((t <= t0) != before) continue;
      const double y = s(static_cast<Eigen::Index>(j), component);
      n += 1.0;
      sx += t;
      sy += y;
      sxx += t * t;
      sxy += t * y;
    }
    if (n < 2.0) throw DegenerateSegment("fewer than two process points on one side of t0");
    const double denom = sxx - sx * sx / n;
    return (sxy - sx * sy / n) / denom;
  };

  const double first = ols_slope(true);
  const double second = ols_slope(false);
  if (std::abs(first) < 1e-12) throw DegenerateSegment("slope before the changepoint is zero");
  return second / first;
}

std::vector<Basis> resolve_candidate(const Candidate& candidate, const ScoreProcessTrace* trace) {
  std::vector<Basis> shapes;
  shapes.reserve(candidate.components.size());
  for (std::size_t j = 0; j < candidate.components.size(); ++j) {
    const ComponentSpec& spec = candidate.components[j];
    Basis b = spec.basis;
    if (spec.auto_ratio) {
      auto* cp = std::get_if<basis::Changepoint>(&b);
      if (cp == nullptr) throw DomainError("automatic ratio requires a changepoint basis");
      if (trace == nullptr) throw DomainError("automatic ratio requires a score process");
      cp->ratio = slope_ratio_changepoint(*trace, static_cast<Eigen::Index>(j), cp->t0);
    }
    shapes.push_back(std::move(b));
  }
  return shapes;
}

Selection select_effect(const TransformedDataset& data, const CandidateSet& candidates,
                        const FitOptions& options) {
  if (candidates.candidates.empty()) throw DomainError("empty candidate set");
  const bool needs_trace = std::any_of(
      candidates.candidates.begin(), candidates.candidates.end(), [](const Candidate& c) {
        return std::any_of(c.components.begin(), c.components.end(),
                           [](const ComponentSpec& s) { return s.auto_ratio; });
      });
  std::optional<ScoreProcessTrace> trace;
  std::string trace_error;
  if (needs_trace) {
    try {
      trace = score_process(data, Vector::Zero(data.dimension()));
    } catch (const Error& e) {
      trace_error = e.what();
    }
  }

  Selection out;
  for (std::size_t c = 0; c < candidates.candidates.size(); ++c) {
    const Candidate& cand = candidates.candidates[c];
    try {
      if (static_cast<Eigen::Index>(cand.components.size()) != data.dimension())
        throw DomainError("candidate has the wrong number of components");
      const bool wants_trace = std::any_of(cand.components.begin(), cand.components.end(),
                                           [](const ComponentSpec& s) { return s.auto_ratio; });
      if (wants_trace && !trace) throw DegenerateData("score process unavailable: " + trace_error);
      const std::vector<Basis> shapes = resolve_candidate(cand, trace ? &*trace : nullptr);
      out.ranking.push_back(RankedFit{c, cand.name, fit_partial_likelihood(data, shapes, options)});
    } catch (const Error& e) {
      out.failures.push_back(CandidateFailure{c, cand.name, e.what()});
    }
  }
  if (out.ranking.empty()) {
    std::string msg = "every candidate failed to fit";
    for (const CandidateFailure& f : out.failures) msg += "\n  " + f.name + ": " + f.reason;
    throw AllCandidatesFailed(msg);
  }
  std::stable_sort(out.ranking.begin(), out.ranking.end(),
                   [](const RankedFit& a, const RankedFit& b) {
                     return a.fit.r2.value > b.fit.r2.value;
                   });
  return out;
}

}  // namespace survscore

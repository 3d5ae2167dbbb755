#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "survscore/effect.hpp"
#include "survscore/linalg.hpp"
#include "survscore/survival.hpp"

namespace survscore {

/// Mean and covariance of covariate rows under exponential-tilt weights
/// w_j = m_j * exp(beta^T z_j), where m_j is a row multiplicity.
struct WeightedMoments {
  Vector mean;
  Matrix cov;
  double log_normalizer = 0.0;  // log sum_j w_j
};

/// `multiplicity` may be empty (all ones). Exponents are shifted by their
/// maximum before exponentiation.
WeightedMoments weighted_moments(const Eigen::Ref<const Matrix>& rows,
                                 const Eigen::Ref<const Eigen::VectorXd>& multiplicity,
                                 const Vector& beta);
WeightedMoments weighted_moments(const Eigen::Ref<const Matrix>& rows, const Vector& beta);

/// Moments over the risk set of grid point `grid_index` (0-based, i.e. the
/// failure at t = (grid_index + 1) / k_n).
WeightedMoments grid_moments(const TransformedDataset& data, std::size_t grid_index,
                             const Vector& beta);

/// Moments at every grid point, with betas[i] applied at grid point i.
/// Runs of equal consecutive betas share one backward sweep over the sorted
/// risk sets, so piecewise-constant effects cost O(n) per piece.
std::vector<WeightedMoments> sweep_grid_moments(const TransformedDataset& data,
                                                const std::vector<Vector>& betas);
std::vector<WeightedMoments> sweep_grid_moments(const TransformedDataset& data,
                                                const Vector& beta);

/// Covariate of the subject failing at grid point `grid_index`.
Vector failing_covariate(const TransformedDataset& data, std::size_t grid_index);

/// Full description of one risk set.
struct RiskSetMoments {
  double time = 0.0;
  std::vector<std::size_t> at_risk;  // subject indices, sorted order
  Vector pi;                         // aligned with at_risk
  Vector mean;
  Matrix cov;
  Matrix cov_sqrt;
  std::optional<Matrix> cov_inv_sqrt;  // present iff cov is positive definite

  bool positive_definite() const { return cov_inv_sqrt.has_value(); }
  /// Throws DegenerateRiskSet when cov is not positive definite.
  const Matrix& inv_sqrt() const;
};

RiskSetMoments riskset_moments(const TransformedDataset& data, std::size_t grid_index,
                               const Vector& beta);
RiskSetMoments riskset_moments(const TransformedDataset& data, std::size_t grid_index,
                               const TemporalEffect& effect);

struct SigmaHat {
  Matrix matrix;
  Matrix inv_sqrt;
};

/// Average of the risk-set covariances over the k_n grid points at beta0.
/// Throws SingularMatrix when the average is not positive definite.
SigmaHat sigma_hat(const TransformedDataset& data, const Vector& beta0);

}  // namespace survscore

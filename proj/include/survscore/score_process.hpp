#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "survscore/effect.hpp"
#include "survscore/moments.hpp"
#include "survscore/survival.hpp"

namespace survscore {

/// The standardized score process U*(beta0, .) on the grid 0, 1/k_n, ..., 1.
/// Row j of `values` is U* at grid[j]; row j of `increments` is the whitened
/// residual V^{-1/2} r at t_{j+1}.
struct ScoreProcessTrace {
  Vector beta0;
  std::vector<double> grid;
  Matrix values;
  Matrix increments;
  std::optional<SigmaHat> sigma;            // absent when Sigma-hat is singular
  std::optional<Matrix> standardized_values;  // Sigma-hat^{-1/2} U*, row per grid point

  std::size_t k_n() const { return grid.empty() ? 0 : grid.size() - 1; }
  Eigen::Index dimension() const { return values.cols(); }
  bool standardized() const { return standardized_values.has_value(); }

  /// Linear interpolation between grid points; u is clamped to [0, 1].
  Vector value_at(double u) const;
  Vector standardized_at(double u) const;
};

/// Throws DegenerateData when k_n < 2; propagates DegenerateRiskSet.
ScoreProcessTrace score_process(const TransformedDataset& data, const Vector& beta0);

/// sqrt(k_n) * Sigma^{1/2} * int_0^t (beta(s) - beta0) ds: the mean curve
/// of U*(beta0, .) under the effect.
Vector expected_drift(const TemporalEffect& effect, const Vector& beta0, const Matrix& sigma,
                      std::size_t k_n, double t);

struct ConfidenceBand {
  Eigen::Index component = 0;  // 0-based
  double alpha = 0.05;
  double slope = 0.0;       // [Sigma-hat^{-1/2} U*(beta0, 1)]_i
  double half_width = 0.0;  // ||column i of Sigma-hat^{-1/2}||_2 * a(alpha)
  bool crossed = false;
  std::optional<double> first_crossing;

  double lower(double t) const { return t * slope - half_width; }
  double upper(double t) const { return t * slope + half_width; }
};

/// One band per component. Throws SingularMatrix when the trace is not
/// standardized.
std::vector<ConfidenceBand> confidence_bands(const ScoreProcessTrace& trace, double alpha);

/// ||col_i||^{-1} sup_t |(Sigma-hat^{-1/2}{U*(t) - t U*(1)})_i|; reject a
/// constant effect for component i at level alpha iff this exceeds a(alpha).
double bridge_sup_statistic(const ScoreProcessTrace& trace, Eigen::Index component);

}  // namespace survscore

#pragma once

#include "survscore/effect.hpp"
#include "survscore/survival.hpp"

namespace survscore {

/// R^2(alpha(t)) = 1 - numerator / denominator, with
/// numerator = Q-hat(F-hat, alpha, alpha) and denominator = Q-hat(F-hat, 0, alpha).
struct R2Result {
  double value = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  TemporalEffect effect;
};

/// Average over the informative failures of the squared residual at alpha1
/// (p = 1), or of the squared projection alpha2(t_i)^T r_{alpha1}(t_i) (p > 1).
double q_hat(const TransformedDataset& data, const TemporalEffect& alpha1,
             const TemporalEffect& alpha2);

/// Throws ZeroDenominator when Q-hat(F-hat, 0, alpha) vanishes.
R2Result r_squared(const TransformedDataset& data, const TemporalEffect& effect);

}  // namespace survscore

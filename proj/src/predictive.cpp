#include "survscore/predictive.hpp"

#include "survscore/errors.hpp"
#include "survscore/moments.hpp"

namespace survscore {

namespace {

std::vector<Vector> effect_on_grid(const TransformedDataset& data, const TemporalEffect& effect) {
  if (effect.dimension() != data.dimension())
    throw DomainError("effect dimension does not match the dataset");
  std::vector<Vector> out;
  out.reserve(data.k_n());
  for (const auto& g : data.grid()) out.push_back(effect(g.t));
  return out;
}

}  // namespace

double q_hat(const TransformedDataset& data, const TemporalEffect& alpha1,
             const TemporalEffect& alpha2) {
  const std::size_t k = data.k_n();
  if (k == 0) throw NoInformativeFailures();
  const std::vector<Vector> a1 = effect_on_grid(data, alpha1);
  const std::vector<WeightedMoments> moments = sweep_grid_moments(data, a1);
  const bool univariate = data.dimension() == 1;
  const std::vector<Vector> a2 = univariate ? std::vector<Vector>{} : effect_on_grid(data, alpha2);

  double acc = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const Vector r = failing_covariate(data, i) - moments[i].mean;
    const double term = univariate ? r(0) : a2[i].dot(r);
    acc += term * term;
  }
  return acc / static_cast<double>(k);
}

R2Result r_squared(const TransformedDataset& data, const TemporalEffect& effect) {
  R2Result out;
  out.effect = effect;
  out.numerator = q_hat(data, effect, effect);
  out.denominator = q_hat(data, TemporalEffect::zero(effect.dimension()), effect);
  if (!(out.denominator > 0.0))
    throw ZeroDenominator("R^2 denominator vanishes: null residuals have no projection on the effect");
  out.value = 1.0 - out.numerator / out.denominator;
  return out;
}

}  // namespace survscore

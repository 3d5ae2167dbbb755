#include "survscore/limit_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "survscore/errors.hpp"
#include "survscore/moments.hpp"

namespace survscore {

double r_squared_limit_oracle(const TemporalEffect& effect_true, const TemporalEffect& effect_eval,
                              const SimulationScenario& scenario,
                              const LimitOracleOptions& options) {
  if (options.grid_points < 2) throw DomainError("limit oracle needs at least two grid points");
  SimulationScenario sc = scenario;
  sc.true_effect = effect_true;
  sc.n = std::max(sc.n, options.population);
  const TransformedDataset data = time_transform(simulate_dataset(sc));
  const std::size_t k = data.k_n();
  const Eigen::Index p = data.dimension();
  const bool univariate = p == 1;
  const Vector zero = Vector::Zero(p);

  const std::size_t m = options.grid_points;
  std::vector<double> num(m), den(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double tau = static_cast<double>(j) / static_cast<double>(m - 1);
    const double pos = std::ceil(tau * static_cast<double>(k)) - 1.0;
    const auto i = static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(k - 1)));
    const Vector beta = effect_true(tau);
    const Vector alpha = effect_eval(tau);
    const WeightedMoments at_beta = grid_moments(data, i, beta);
    const Vector e_alpha = grid_moments(data, i, alpha).mean;
    const Vector e_zero = grid_moments(data, i, zero).mean;
    if (univariate) {
      const double v = at_beta.cov(0, 0);
      num[j] = v + std::pow(e_alpha(0) - at_beta.mean(0), 2);
      den[j] = v + std::pow(e_zero(0) - at_beta.mean(0), 2);
    } else {
      const double v = alpha.dot(at_beta.cov * alpha);
      num[j] = v + std::pow(alpha.dot(at_beta.mean - e_alpha), 2);
      den[j] = v + std::pow(alpha.dot(at_beta.mean - e_zero), 2);
    }
  }
  auto trapezoid = [m](const std::vector<double>& f) {
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t j = 1; j + 1 < m; ++j) s += f[j];
    return s / static_cast<double>(m - 1);
  };
  const double d = trapezoid(den);
  if (!(d > 0.0)) throw ZeroDenominator("limit R^2 denominator vanishes");
  return 1.0 - trapezoid(num) / d;
}

}  // namespace survscore

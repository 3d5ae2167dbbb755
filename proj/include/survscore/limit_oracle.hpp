#pragma once

#include "survscore/effect.hpp"
#include "survscore/simulation.hpp"

namespace survscore {

struct LimitOracleOptions {
  std::size_t population = 20000;  // size of the simulated risk-set sequence
  std::size_t grid_points = 200;   // equispaced on [0, 1], trapezoid rule
};

/// Large-sample limit of R^2(effect_eval) when data follow effect_true:
/// conditional means e(., t) and variances v(beta(t), t) are taken over the
/// at-risk population of one large dataset simulated from `scenario` with
/// its true effect replaced by `effect_true`.
double r_squared_limit_oracle(const TemporalEffect& effect_true, const TemporalEffect& effect_eval,
                              const SimulationScenario& scenario,
                              const LimitOracleOptions& options = {});

}  // namespace survscore

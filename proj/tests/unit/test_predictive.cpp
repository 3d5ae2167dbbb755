#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "survscore/errors.hpp"
#include "survscore/limit_oracle.hpp"
#include "survscore/predictive.hpp"

using namespace survscore;

namespace {

TransformedDataset two_one_zero() {
  Matrix z(3, 1);
  z << 2, 1, 0;
  return time_transform(make_dataset({10, 20, 30}, {1, 1, 1}, z));
}

TemporalEffect constant(double b) { return TemporalEffect::constant(Vector::Constant(1, b)); }

}  // namespace

TEST(QHat, NullResiduals) {
  EXPECT_NEAR(q_hat(two_one_zero(), constant(0.0), constant(0.0)), 0.625, 1e-15);
}

TEST(QHat, LogTwoResiduals) {
  const double expected = 0.5 * (std::pow(4.0 / 7.0, 2) + std::pow(1.0 / 3.0, 2));
  EXPECT_NEAR(q_hat(two_one_zero(), constant(std::log(2.0)), constant(std::log(2.0))), expected, 1e-14);
  EXPECT_NEAR(expected, 0.218821, 1e-6);
}

TEST(QHat, ZeroProjectionForMultivariate) {
  std::mt19937_64 gen(51);
  const TransformedDataset t = time_transform(oracle::random_dataset(gen, 30, 2));
  EXPECT_EQ(q_hat(t, TemporalEffect::zero(2), TemporalEffect::zero(2)), 0.0);
}

TEST(RSquared, ExampleValue) {
  const R2Result r = r_squared(two_one_zero(), constant(std::log(2.0)));
  EXPECT_NEAR(r.value, 0.6499, 1e-4);
  EXPECT_EQ(r.value, 1.0 - r.numerator / r.denominator);
}

TEST(RSquared, ZeroEffectIsZeroForOneCovariate) {
  std::mt19937_64 gen(52);
  for (int rep = 0; rep < 200; ++rep) {
    const SurvivalDataset d = oracle::random_dataset(gen, 10 + static_cast<std::size_t>(rep % 40), 1);
    if (count_informative_failures(d) == 0) continue;
    EXPECT_EQ(r_squared(time_transform(d), TemporalEffect::zero(1)).value, 0.0);
  }
}

TEST(RSquared, ZeroEffectWithSeveralCovariatesHasNoDenominator) {
  std::mt19937_64 gen(53);
  EXPECT_THROW(r_squared(time_transform(oracle::random_dataset(gen, 30, 2)), TemporalEffect::zero(2)),
               ZeroDenominator);
}

TEST(RSquared, AtMostOneAndInvariantToLocationAndScale) {
  std::mt19937_64 gen(54);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int rep = 0; rep < 200; ++rep) {
    const SurvivalDataset d = oracle::random_dataset(gen, 25, 1);
    const TransformedDataset t = time_transform(d);
    const double b = u(gen);
    const double base = r_squared(t, constant(b)).value;
    EXPECT_LE(base, 1.0);
    SurvivalDataset shifted = d, scaled = d;
    for (auto& s : shifted.subjects) s.covariates = CovariatePath::fixed(s.covariates.fixed_value().array() - 1.3);
    for (auto& s : scaled.subjects) s.covariates = CovariatePath::fixed(s.covariates.fixed_value() * 2.5);
    EXPECT_NEAR(r_squared(time_transform(shifted), constant(b)).value, base, 1e-10);
    EXPECT_NEAR(r_squared(time_transform(scaled), constant(b / 2.5)).value, base, 1e-10);
  }
}

TEST(RSquared, ApproachesOneWhenTheLargestCovariateAlwaysFails) {
  Matrix z(5, 1);
  z << 4, 3, 2, 1, 0;
  const TransformedDataset t = time_transform(make_dataset({1, 2, 3, 4, 5}, {1, 1, 1, 1, 1}, z));
  EXPECT_GT(r_squared(t, constant(40.0)).value, 1.0 - 1e-12);
}

TEST(LimitOracle, NullEffectGivesZero) {
  SimulationScenario sc;
  sc.seed = 5;
  LimitOracleOptions opt;
  opt.population = 5000;
  EXPECT_NEAR(r_squared_limit_oracle(TemporalEffect::zero(1), TemporalEffect::zero(1), sc, opt), 0.0, 1e-12);
}

TEST(LimitOracle, TrueEffectMaximisesTheLimit) {
  SimulationScenario sc;
  sc.seed = 6;
  const TemporalEffect truth(Vector::Constant(1, 3.0), {basis::Power{2.0}});
  const double best = r_squared_limit_oracle(truth, truth, sc);
  for (const TemporalEffect& other :
       {constant(1.0), constant(1.5), TemporalEffect(Vector::Constant(1, 2.5), {basis::Power{1.0}}),
        TemporalEffect(Vector::Constant(1, 3.0), {basis::Power{3.0}}),
        TemporalEffect(Vector::Constant(1, 1.8), {basis::OneMinusSquare{}})})
    EXPECT_LT(r_squared_limit_oracle(truth, other, sc), best);
}

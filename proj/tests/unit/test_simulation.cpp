#include <map>

#include <boost/math/distributions/chi_squared.hpp>
#include <gtest/gtest.h>

#include "survscore/errors.hpp"
#include "survscore/rng.hpp"
#include "survscore/simulation.hpp"

using namespace survscore;

TEST(Rng, SplitMixReferenceValues) {
  // SplitMix64 seeded with 0: first outputs of the reference implementation.
  Rng rng(0);
  EXPECT_EQ(rng(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(rng(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(replicate_seed(7, 3), mix64(7 + 0x9E3779B97F4A7C15ULL * 4));
}

TEST(Rng, VariatesStayInRange) {
  Rng rng(99);
  for (int i = 0; i < 10000; ++i) {
    const double u = rng.open_uniform();
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(rng.below(7), 7u);
  }
}

TEST(Simulate, NullAbsoluteTimeIsUnitExponential) {
  SimulationScenario sc;
  sc.n = 10000;
  sc.generator = Generator::AbsoluteTime;
  sc.seed = 2024;
  const SurvivalDataset d = simulate_dataset(sc);
  double sum = 0.0;
  for (const Subject& s : d.subjects) {
    EXPECT_EQ(s.status, 1);
    sum += s.observed_time;
  }
  const double mean = sum / static_cast<double>(d.size());
  EXPECT_GT(mean, 0.9);
  EXPECT_LT(mean, 1.1);
}

TEST(Simulate, NullRankConditionalOrdersAreUniform) {
  SimulationScenario sc;
  sc.n = 4;
  sc.covariates = GaussianLaw{Vector::Zero(1), Matrix::Identity(1, 1)};
  std::map<std::vector<std::string>, int> counts;
  const int draws = 24000;
  for (int r = 0; r < draws; ++r) {
    sc.seed = replicate_seed(77, static_cast<std::size_t>(r));
    const SurvivalDataset d = simulate_dataset(sc);
    std::vector<std::pair<double, std::string>> order;
    for (const Subject& s : d.subjects) order.emplace_back(s.observed_time, s.id);
    std::sort(order.begin(), order.end());
    std::vector<std::string> ids;
    for (auto& o : order) ids.push_back(o.second);
    ++counts[ids];
  }
  ASSERT_EQ(counts.size(), 24u);
  double chi2 = 0.0;
  for (const auto& [k, c] : counts) chi2 += std::pow(c - 1000.0, 2) / 1000.0;
  const double p = 1.0 - boost::math::cdf(boost::math::chi_squared(23.0), chi2);
  EXPECT_GT(p, 0.01);
}

TEST(Simulate, CensoringKinds) {
  SimulationScenario sc;
  sc.n = 400;
  sc.censoring = ExponentialCensoring{1.0};
  std::size_t censored = 0;
  for (const Subject& s : simulate_dataset(sc).subjects) censored += s.status == 0;
  EXPECT_GT(censored, 140u);
  EXPECT_LT(censored, 260u);

  sc.censoring = AdministrativeCensoring{0.5};
  const SurvivalDataset d = simulate_dataset(sc);
  std::size_t after = 0;
  for (const Subject& s : d.subjects) {
    EXPECT_LE(s.observed_time, 0.5);
    after += s.status == 0;
  }
  EXPECT_EQ(after, 200u);

  sc.generator = Generator::AbsoluteTime;
  sc.censoring = AdministrativeCensoring{0.3};
  for (const Subject& s : simulate_dataset(sc).subjects) {
    EXPECT_LE(s.observed_time, 0.3);
    if (s.observed_time == 0.3) EXPECT_EQ(s.status, 0);
  }
}

TEST(Simulate, InvalidScenarios) {
  SimulationScenario sc;
  sc.n = 1;
  EXPECT_THROW(simulate_dataset(sc), InvalidScenario);
  sc.n = 10;
  sc.covariates = BernoulliLaw{1.0};
  EXPECT_THROW(simulate_dataset(sc), InvalidScenario);
  Matrix cov(2, 2);
  cov << 1, 2, 2, 1;
  sc.p = 2;
  sc.true_effect = TemporalEffect::zero(2);
  sc.covariates = GaussianLaw{Vector::Zero(2), cov};
  EXPECT_THROW(simulate_dataset(sc), InvalidScenario);
  sc.covariates = GaussianLaw{Vector::Zero(2), Matrix::Identity(2, 2)};
  sc.generator = Generator::AbsoluteTime;
  sc.true_effect = TemporalEffect(Vector::Ones(2), {basis::Power{1.0}, basis::Constant{}});
  EXPECT_THROW(simulate_dataset(sc), InvalidScenario);
  sc.time_horizon = 2.0;
  EXPECT_NO_THROW(simulate_dataset(sc));
}

TEST(Simulate, SameSeedSameData) {
  SimulationScenario sc;
  sc.n = 50;
  sc.seed = 5;
  sc.true_effect = TemporalEffect(Vector::Constant(1, 2.0), {basis::Power{2.0}});
  const SurvivalDataset a = simulate_dataset(sc), b = simulate_dataset(sc);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.subjects[i].observed_time, b.subjects[i].observed_time);
    EXPECT_EQ(a.subjects[i].covariates.at(0)(0), b.subjects[i].covariates.at(0)(0));
  }
}

TEST(Replications, IndependentOfThreadCount) {
  SimulationScenario sc;
  sc.seed = 123;
  sc.true_effect = TemporalEffect::constant(Vector::Constant(1, 0.8));
  const std::vector<Analysis> analyses{BandAnalysis{{0.05}}, FitAnalysis{Candidate{"c", {ComponentSpec{}}}},
                                       DriftAnalysis{}};
  const ReplicationReport one = run_replications(sc, 12, analyses, 1);
  const ReplicationReport four = run_replications(sc, 12, analyses, 4);
  for (std::size_t r = 0; r < 12; ++r) {
    EXPECT_EQ(one.records[r].seed, replicate_seed(123, r));
    EXPECT_EQ(one.records[r].seed, four.records[r].seed);
    EXPECT_EQ(one.records[r].band->sup_statistic, four.records[r].band->sup_statistic);
    EXPECT_EQ(one.records[r].fits[0].loadings, four.records[r].fits[0].loadings);
    EXPECT_EQ(one.records[r].drift->standardized, four.records[r].drift->standardized);
  }
}

TEST(Replications, ConstantEffectIsRecovered) {
  SimulationScenario sc;
  sc.seed = 9;
  sc.true_effect = TemporalEffect::constant(Vector::Constant(1, 1.5));
  const ReplicationReport rep = run_replications(sc, 100, {FitAnalysis{Candidate{"c", {ComponentSpec{}}}}});
  std::vector<double> b;
  for (const auto& r : rep.records) b.push_back(r.fits[0].loadings(0));
  EXPECT_NEAR(mean_se(b).mean, 1.5, 0.1);
}

TEST(MeanSe, SmallSample) {
  const MeanSe m = mean_se({1.0, 2.0, 3.0});
  EXPECT_DOUBLE_EQ(m.mean, 2.0);
  EXPECT_NEAR(m.se, 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_EQ(m.count, 3u);
}

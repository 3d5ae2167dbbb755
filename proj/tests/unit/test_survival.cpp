#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "survscore/errors.hpp"
#include "survscore/survival.hpp"

using namespace survscore;

namespace {

SurvivalDataset three_failures() {
  Matrix z(3, 1);
  z << 2, 1, 0;
  return make_dataset({10, 20, 30}, {1, 1, 1}, z);
}

bool has_message(const ValidationReport& r, const std::string& m) {
  for (const auto& v : r.violations)
    if (v.message == m) return true;
  return false;
}

}  // namespace

TEST(Validate, WellFormedDatasetHasNoViolations) { EXPECT_TRUE(validate(three_failures()).ok()); }

TEST(Validate, NegativeTime) {
  SurvivalDataset d = three_failures();
  d.subjects[1].observed_time = -1.0;
  EXPECT_TRUE(has_message(validate(d), "negative time"));
}

TEST(Validate, NoFailures) {
  SurvivalDataset d = three_failures();
  for (auto& s : d.subjects) s.status = 0;
  EXPECT_TRUE(has_message(validate(d), "no failures"));
}

TEST(Validate, DimensionMismatchAndDuplicateIds) {
  SurvivalDataset d = three_failures();
  d.subjects[0].covariates = CovariatePath::fixed(Vector::Zero(2));
  d.subjects[2].id = d.subjects[1].id;
  const ValidationReport r = validate(d);
  EXPECT_TRUE(has_message(r, "dimension mismatch"));
  EXPECT_TRUE(has_message(r, "duplicate id"));
}

TEST(Csv, ReadsHeaderAndRows) {
  std::istringstream in("id,time,status,z1,z2\na,1.5,1,0.5,1\nb,2,0,-1,2e-1\n");
  const SurvivalDataset d = read_dataset_csv(in);
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.dimension, 2);
  EXPECT_EQ(d.subjects[1].id, "b");
  EXPECT_DOUBLE_EQ(d.subjects[1].covariates.at(0)(1), 0.2);
  EXPECT_EQ(d.subjects[1].status, 0);
}

TEST(Csv, ReportsLineNumbers) {
  std::istringstream in("id,time,status,z1\na,1,1,0\nb,x,1,0\n");
  try {
    read_dataset_csv(in);
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(Csv, RejectsBadHeader) {
  std::istringstream in("id,t,status,z1\n");
  EXPECT_THROW(read_dataset_csv(in), InputError);
}

TEST(CovariatePath, StepIsRightContinuous) {
  const CovariatePath p = CovariatePath::step({{0.0, Vector::Constant(1, 1.0)}, {2.0, Vector::Constant(1, 5.0)}});
  EXPECT_EQ(p.at(1.999)(0), 1.0);
  EXPECT_EQ(p.at(2.0)(0), 5.0);
  EXPECT_EQ(p.at(-1.0)(0), 1.0);
}

TEST(InformativeFailures, SingletonLastRiskSetIsExcluded) {
  EXPECT_EQ(count_informative_failures(three_failures()), 2u);
}

TEST(InformativeFailures, IdenticalCovariatesGiveZero) {
  Matrix z = Matrix::Constant(4, 1, 3.0);
  EXPECT_EQ(count_informative_failures(make_dataset({1, 2, 3, 4}, {1, 1, 0, 1}, z)), 0u);
  EXPECT_THROW(time_transform(make_dataset({1, 2, 3, 4}, {1, 1, 0, 1}, z)), NoInformativeFailures);
}

TEST(InformativeFailures, FailureThenCensoring) {
  Matrix z(2, 1);
  z << 1, 0;
  EXPECT_EQ(count_informative_failures(make_dataset({1, 2}, {1, 0}, z)), 1u);
}

TEST(TimeTransform, CensoredSubjectSitsBetweenFailures) {
  Matrix z(3, 1);
  z << 2, 1, 0;
  const SurvivalDataset d = make_dataset({10, 15, 20}, {1, 0, 1}, z);
  const std::vector<double> phi = rank_time_map(d, 2);
  EXPECT_DOUBLE_EQ(phi[0], 0.5);
  EXPECT_DOUBLE_EQ(phi[1], 0.75);
  EXPECT_DOUBLE_EQ(phi[2], 1.0);

  // The last failure's risk set is a singleton, so only one failure is
  // informative and the map is normalised by 1.
  const TransformedDataset t = time_transform(d);
  EXPECT_EQ(t.k_n(), 1u);
  EXPECT_DOUBLE_EQ(t.transformed_times()[0], 1.0);
  EXPECT_DOUBLE_EQ(t.transformed_times()[1], 1.5);
  EXPECT_DOUBLE_EQ(t.transformed_times()[2], 2.0);
  ASSERT_EQ(t.excluded_failures().size(), 1u);
  EXPECT_EQ(t.excluded_failures()[0], "3");
}

TEST(TimeTransform, TiesBreakFailuresFirstThenId) {
  Matrix z(4, 1);
  z << 0, 1, 2, 3;
  const SurvivalDataset d = make_dataset({5, 5, 5, 9}, {0, 1, 1, 1}, z, {"c", "b", "a", "d"});
  const auto order = tie_broken_order(d);
  EXPECT_EQ(d.subjects[order[0]].id, "a");
  EXPECT_EQ(d.subjects[order[1]].id, "b");
  EXPECT_EQ(d.subjects[order[2]].id, "c");
}

TEST(TimeTransform, GridAndOrderProperties) {
  std::mt19937_64 gen(21);
  for (int rep = 0; rep < 200; ++rep) {
    const std::size_t n = 5 + static_cast<std::size_t>(rep % 40);
    const SurvivalDataset d = oracle::random_dataset(gen, n, 1 + rep % 3, rep % 2 == 0);
    if (count_informative_failures(d) == 0) continue;
    const TransformedDataset t = time_transform(d);
    const auto expected = oracle::informative_failures(d);
    ASSERT_EQ(t.k_n(), expected.size());
    const double k = static_cast<double>(t.k_n());
    for (std::size_t i = 0; i < t.k_n(); ++i) {
      EXPECT_EQ(t.grid()[i].subject, expected[i]);
      EXPECT_DOUBLE_EQ(t.grid()[i].t, static_cast<double>(i + 1) / k);
      EXPECT_DOUBLE_EQ(t.transformed_times()[expected[i]], static_cast<double>(i + 1) / k);
    }
    const auto& phi = t.transformed_times();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (d.subjects[a].observed_time < d.subjects[b].observed_time) EXPECT_LE(phi[a], phi[b]);
    // Censored images fall strictly between adjacent failure images.
    for (std::size_t a = 0; a < n; ++a) {
      if (d.subjects[a].status == 1 || phi[a] > 1.0) continue;
      const double below = std::floor(phi[a] * k) / k;
      EXPECT_GT(phi[a], below - 1e-15);
      EXPECT_LT(phi[a], below + 1.0 / k);
      for (std::size_t i = 0; i < t.k_n(); ++i) EXPECT_NE(phi[a], t.grid()[i].t);
    }
  }
}

TEST(TimeTransform, TimeDependentCovariatesAreEvaluatedAtFailureTimes) {
  SurvivalDataset d;
  d.dimension = 1;
  auto add = [&](std::string id, double t, int s, CovariatePath p) {
    d.subjects.push_back(Subject{std::move(id), t, s, std::move(p)});
  };
  add("a", 1, 1, CovariatePath::fixed(Vector::Constant(1, 1.0)));
  add("b", 2, 1, CovariatePath::step({{0.0, Vector::Constant(1, 1.0)}, {1.5, Vector::Constant(1, 0.0)}}));
  add("c", 3, 0, CovariatePath::fixed(Vector::Constant(1, 1.0)));
  // At t=1 every at-risk covariate equals 1; at t=2 the risk set is {0, 1}.
  const TransformedDataset t = time_transform(d);
  ASSERT_EQ(t.k_n(), 1u);
  EXPECT_EQ(t.grid()[0].subject, 1u);
  EXPECT_DOUBLE_EQ(t.covariate(t.grid()[0].position, 0)(0), 0.0);
}

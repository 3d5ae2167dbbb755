#include <sstream>

#include <gtest/gtest.h>

#include "survscore/errors.hpp"
#include "survscore/io.hpp"

using namespace survscore;

TEST(CandidateJson, ObjectsArraysAndAutoRatio) {
  const CandidateSet set = io::parse_candidate_set(R"({"candidates": [
    {"name": "ph", "components": [{"basis": "constant"}]},
    {"name": "cp", "components": [{"component": 1, "basis": "changepoint", "t0": 0.6, "ratio": "auto"}]},
    [{"basis": "power", "k": 2}],
    ["log"]
  ]})");
  ASSERT_EQ(set.candidates.size(), 4u);
  EXPECT_EQ(set.candidates[0].name, "ph");
  EXPECT_TRUE(set.candidates[1].components[0].auto_ratio);
  EXPECT_DOUBLE_EQ(std::get<basis::Changepoint>(set.candidates[1].components[0].basis).t0, 0.6);
  EXPECT_EQ(set.candidates[2].name, "candidate_3");
  EXPECT_DOUBLE_EQ(std::get<basis::Power>(set.candidates[2].components[0].basis).k, 2.0);
  EXPECT_TRUE(std::holds_alternative<basis::LogT>(set.candidates[3].components[0].basis));
}

TEST(CandidateJson, Errors) {
  EXPECT_THROW(io::parse_candidate_set("{"), InputError);
  EXPECT_THROW(io::parse_candidate_set("[]"), InputError);
  EXPECT_THROW(io::parse_candidate_set(R"([[{"basis": "spline"}]])"), InputError);
  EXPECT_THROW(io::parse_candidate_set(R"([[{"basis": "changepoint"}]])"), InputError);
  EXPECT_THROW(io::parse_candidate_set(R"([[{"basis": "changepoint", "t0": 1.5}]])"), DomainError);
}

TEST(ScenarioJson, RoundTrip) {
  const SimulationScenario sc = io::parse_scenario(R"({
    "n": 150, "covariates": {"law": "gaussian", "mean": [0, 1], "covariance": [[1, 0.5], [0.5, 1]]},
    "true_effect": {"components": [{"basis": "changepoint", "t0": 0.5, "ratio": 0, "loading": 1},
                                   {"basis": "constant", "loading": -1}]},
    "censoring": {"type": "exponential", "rate": 0.25}, "seed": 18446744073709551615})");
  EXPECT_EQ(sc.n, 150u);
  EXPECT_EQ(sc.p, 2);
  EXPECT_EQ(sc.seed, 18446744073709551615ULL);
  EXPECT_DOUBLE_EQ(sc.true_effect(0.7)(1), -1.0);
  const SimulationScenario back = io::parse_scenario(io::scenario_json(sc));
  EXPECT_EQ(io::scenario_json(back), io::scenario_json(sc));
}

TEST(ScenarioJson, Invalid) {
  EXPECT_THROW(io::parse_scenario(R"({"n": 1})"), InvalidScenario);
  EXPECT_THROW(io::parse_scenario(R"({"generator": "magic"})"), InvalidScenario);
  EXPECT_THROW(io::parse_scenario(R"({"covariates": {"law": "bernoulli", "q": 0}})"), InvalidScenario);
}

TEST(EffectJson, NumberMeansConstant) {
  const TemporalEffect e = io::parse_effect("1.5");
  EXPECT_DOUBLE_EQ(e(0.3)(0), 1.5);
}

TEST(TraceCsv, HeaderAndRows) {
  Matrix z(4, 1);
  z << 3, 2, 1, 0;
  const ScoreProcessTrace tr = score_process(time_transform(make_dataset({1, 2, 3, 4}, {1, 1, 1, 1}, z)), Vector::Zero(1));
  std::ostringstream out;
  io::write_trace_csv(out, tr, confidence_bands(tr, 0.05));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,u1,s1,lower_1,upper_1");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 4);
  const std::string json = io::trace_json(tr, confidence_bands(tr, 0.05));
  EXPECT_NE(json.find("\"k_n\": 3"), std::string::npos);
  EXPECT_NE(json.find("\"sigma_hat\""), std::string::npos);
}

TEST(ReportJson, ContainsScenarioAndSummary) {
  SimulationScenario sc;
  sc.n = 60;
  const ReplicationReport rep = run_replications(sc, 3, io::parse_analyses(R"([{"type": "band", "alphas": [0.1]}, "drift",
      {"type": "select", "candidates": [["constant"], [{"basis": "power", "k": 1}]]}])"), 1);
  const std::string j = io::report_json(rep);
  for (const char* key : {"\"version\"", "\"scenario\"", "\"summary\"", "\"rejection_rate\"", "\"selected_frequency\"", "\"drift\""})
    EXPECT_NE(j.find(key), std::string::npos) << key;
  std::ostringstream csv;
  io::write_report_csv(csv, rep);
  EXPECT_EQ(csv.str().rfind("replicate,seed,analysis,name,component,key,value\n", 0), 0u);
}

TEST(CandidateJson, ComponentIndexPlacesSpecs) {
  CandidateSet set = io::parse_candidate_set(R"([
    {"name": "second", "components": [{"component": 2, "basis": "power", "k": 1}]},
    {"component": 1, "basis": "changepoint", "t0": 0.6, "ratio": -0.12}
  ])");
  ASSERT_EQ(set.candidates[0].components.size(), 2u);
  EXPECT_TRUE(std::holds_alternative<basis::Constant>(set.candidates[0].components[0].basis));
  EXPECT_TRUE(std::holds_alternative<basis::Power>(set.candidates[0].components[1].basis));
  EXPECT_DOUBLE_EQ(std::get<basis::Changepoint>(set.candidates[1].components[0].basis).ratio, -0.12);

  io::conform_candidates(set, 3);
  EXPECT_EQ(set.candidates[0].components.size(), 3u);
  EXPECT_EQ(set.candidates[1].components.size(), 3u);
  EXPECT_THROW(io::conform_candidates(set, 1), InputError);
  EXPECT_THROW(io::parse_candidate_set(R"([[{"component": 1}, {"component": 1}]])"), InputError);
  EXPECT_THROW(io::parse_candidate_set(R"([[{"component": 0}]])"), InputError);
}

TEST(DatasetCsv, RoundTrip) {
  Matrix z(3, 2);
  z << 0.1, 1, 1.0 / 3.0, 0, -2, 1;
  const SurvivalDataset d = make_dataset({1.5, 0.25, 3}, {1, 0, 1}, z, {"a", "b,c", "d"});
  std::stringstream ss;
  io::write_dataset_csv(ss, d);
  const SurvivalDataset back = read_dataset_csv(ss);
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.subjects[i].id, d.subjects[i].id);
    EXPECT_EQ(back.subjects[i].observed_time, d.subjects[i].observed_time);
    EXPECT_EQ(back.subjects[i].status, d.subjects[i].status);
    EXPECT_EQ(back.subjects[i].covariates.fixed_value(), d.subjects[i].covariates.fixed_value());
  }
}

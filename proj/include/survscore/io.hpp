#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "survscore/effect.hpp"
#include "survscore/model_fit.hpp"
#include "survscore/score_process.hpp"
#include "survscore/simulation.hpp"

// Text formats. JSON is exchanged as strings so that callers do not depend
// on the JSON library.
namespace survscore::io {

const char* library_version();

/// Columns t, u1..up, s1..sp, then lower_i, upper_i per band.
void write_trace_csv(std::ostream& out, const ScoreProcessTrace& trace,
                     const std::vector<ConfidenceBand>& bands);

/// Same fields as the CSV plus k_n, sigma_hat and the per-component band
/// decisions.
std::string trace_json(const ScoreProcessTrace& trace, const std::vector<ConfidenceBand>& bands);

/// Basis object: {"basis": "constant" | "changepoint" | "power" |
/// "one_minus_square" | "log" | "table", "t0", "ratio", "k", "breaks", "values"}.
/// A changepoint "ratio" may be the string "auto".
ComponentSpec parse_component(const std::string& json);

/// Either {"candidates": [...]} or a bare array. Each candidate is
/// {"name": ..., "components": [basis objects]} or an array of basis objects.
CandidateSet parse_candidate_set(const std::string& json);

/// Inverse of parse_candidate_set; every component carries its index.
std::string candidate_set_json(const CandidateSet& set);

/// Pads every candidate to p components with constant effects. Throws
/// InputError if a candidate names a component beyond p.
void conform_candidates(CandidateSet& set, Eigen::Index p);

/// {"components": [basis objects with "loading"]}, or a number for a
/// univariate constant effect.
TemporalEffect parse_effect(const std::string& json);
std::string effect_json(const TemporalEffect& effect);

SimulationScenario parse_scenario(const std::string& json);
std::string scenario_json(const SimulationScenario& scenario);

/// Array of {"type": "band" | "fit" | "select" | "drift", ...}.
std::vector<Analysis> parse_analyses(const std::string& json);

std::string fit_json(const std::string& name, const FitResult& fit);
std::string selection_json(const Selection& selection);
/// Columns rank, candidate, beta0_1..beta0_p, r2, loglik, converged, status;
/// failed candidates follow with an empty rank.
void write_ranking_csv(std::ostream& out, const Selection& selection);

/// Inverse of read_dataset_csv for fixed covariates.
void write_dataset_csv(std::ostream& out, const SurvivalDataset& data);

/// Resolved scenario, analyses, per-replicate records and a summary.
std::string report_json(const ReplicationReport& report);
/// One row per replicate and recorded quantity.
void write_report_csv(std::ostream& out, const ReplicationReport& report);

std::string read_text_file(const std::string& path);

}  // namespace survscore::io

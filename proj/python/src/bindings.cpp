#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "survscore/errors.hpp"
#include "survscore/io.hpp"
#include "survscore/kolmogorov.hpp"
#include "survscore/limit_oracle.hpp"
#include "survscore/model_fit.hpp"
#include "survscore/predictive.hpp"
#include "survscore/score_process.hpp"
#include "survscore/simulation.hpp"
#include "survscore/survival.hpp"

namespace py = pybind11;
using namespace survscore;

namespace {

// Structured values cross the boundary as JSON text; the Python layer
// converts with the json module.

std::string dataset_csv(const SurvivalDataset& d) {
  std::ostringstream ss;
  io::write_dataset_csv(ss, d);
  return ss.str();
}

SurvivalDataset dataset_from_csv(const std::string& text) {
  std::istringstream ss(text);
  return read_dataset_csv(ss);
}

std::string trace_csv(const ScoreProcessTrace& trace, const std::vector<ConfidenceBand>& bands) {
  std::ostringstream ss;
  io::write_trace_csv(ss, trace, bands);
  return ss.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Score-process diagnostics and temporal-effect selection for survival data";
  m.attr("__version__") = io::library_version();

  auto base = py::register_exception<Error>(m, "Error");
  auto input = py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<DegenerateData>(m, "DegenerateData", base.ptr());
  py::register_exception<AnalysisError>(m, "AnalysisError", base.ptr());
  (void)input;

  py::class_<SurvivalDataset>(m, "Dataset")
      .def(py::init([](const std::vector<double>& times, const std::vector<int>& status, const Matrix& z,
                       std::vector<std::string> ids) { return make_dataset(times, status, z, std::move(ids)); }),
           py::arg("times"), py::arg("status"), py::arg("z"), py::arg("ids") = std::vector<std::string>{})
      .def_static("read_csv", &read_dataset_csv_file, py::arg("path"))
      .def_static("from_csv_text", &dataset_from_csv, py::arg("text"))
      .def("to_csv_text", &dataset_csv)
      .def_property_readonly("dimension", [](const SurvivalDataset& d) { return d.dimension; })
      .def("__len__", &SurvivalDataset::size)
      .def_property_readonly("times", [](const SurvivalDataset& d) {
        std::vector<double> v;
        for (const Subject& s : d.subjects) v.push_back(s.observed_time);
        return v;
      })
      .def_property_readonly("status", [](const SurvivalDataset& d) {
        std::vector<int> v;
        for (const Subject& s : d.subjects) v.push_back(s.status);
        return v;
      })
      .def("validate", [](const SurvivalDataset& d) {
        const ValidationReport r = validate(d);
        std::vector<std::pair<std::string, std::string>> out;
        for (const Violation& v : r.violations) out.emplace_back(v.subject, v.message);
        return out;
      });

  py::class_<TransformedDataset>(m, "TransformedDataset")
      .def_property_readonly("k_n", &TransformedDataset::k_n)
      .def_property_readonly("dimension", &TransformedDataset::dimension);

  m.def("time_transform", [](const SurvivalDataset& d) { return time_transform(d); }, py::arg("data"));
  m.def("count_informative_failures", [](const SurvivalDataset& d) { return count_informative_failures(d); },
        py::arg("data"));
  m.def("rank_time_map", &rank_time_map, py::arg("data"), py::arg("normaliser"));

  py::class_<ScoreProcessTrace>(m, "ScoreProcessTrace")
      .def_property_readonly("k_n", &ScoreProcessTrace::k_n)
      .def_readonly("t", &ScoreProcessTrace::grid)
      .def_readonly("u", &ScoreProcessTrace::values)
      .def_readonly("increments", &ScoreProcessTrace::increments)
      .def_property_readonly("s", [](const ScoreProcessTrace& t) -> py::object {
        if (!t.standardized()) return py::none();
        return py::cast(*t.standardized_values);
      })
      .def_property_readonly("sigma_hat", [](const ScoreProcessTrace& t) -> py::object {
        if (!t.sigma) return py::none();
        return py::cast(t.sigma->matrix);
      })
      .def("sup_statistic", &bridge_sup_statistic, py::arg("component") = 0)
      .def("to_json", [](const ScoreProcessTrace& t, double alpha) {
        return io::trace_json(t, t.standardized() ? confidence_bands(t, alpha) : std::vector<ConfidenceBand>{});
      }, py::arg("alpha") = 0.05)
      .def("to_csv_text", [](const ScoreProcessTrace& t, double alpha) {
        return trace_csv(t, t.standardized() ? confidence_bands(t, alpha) : std::vector<ConfidenceBand>{});
      }, py::arg("alpha") = 0.05);

  m.def("score_process", [](const TransformedDataset& data, std::optional<Vector> beta0) {
    return score_process(data, beta0 ? *beta0 : Vector::Zero(data.dimension()));
  }, py::arg("data"), py::arg("beta0") = py::none());

  m.def("kolmogorov_cdf", &kolmogorov_cdf, py::arg("a"));
  m.def("kolmogorov_quantile", &kolmogorov_quantile, py::arg("alpha"));

  m.def("_fit", [](const TransformedDataset& data, const std::string& candidate_json) {
    CandidateSet set = io::parse_candidate_set(candidate_json);
    io::conform_candidates(set, data.dimension());
    const Candidate& c = set.candidates.front();
    std::optional<ScoreProcessTrace> trace;
    for (const ComponentSpec& s : c.components)
      if (s.auto_ratio && !trace) trace = score_process(data, Vector::Zero(data.dimension()));
    return io::fit_json(c.name, fit_partial_likelihood(data, resolve_candidate(c, trace ? &*trace : nullptr)));
  });
  m.def("_select", [](const TransformedDataset& data, const std::string& candidates_json) {
    CandidateSet set = io::parse_candidate_set(candidates_json);
    io::conform_candidates(set, data.dimension());
    return io::selection_json(select_effect(data, set));
  });
  m.def("_r_squared", [](const TransformedDataset& data, const std::string& effect_json) {
    return r_squared(data, io::parse_effect(effect_json)).value;
  });
  m.def("_simulate_dataset", [](const std::string& scenario_json) {
    return simulate_dataset(io::parse_scenario(scenario_json));
  });
  m.def("_run_replications", [](const std::string& scenario_json, std::size_t replicates,
                                const std::string& analyses_json, unsigned threads) {
    const SimulationScenario sc = io::parse_scenario(scenario_json);
    const std::vector<Analysis> analyses = io::parse_analyses(analyses_json);
    ReplicationReport report;
    {
      py::gil_scoped_release release;
      report = run_replications(sc, replicates, analyses, threads);
    }
    return io::report_json(report);
  });
  m.def("_r_squared_limit", [](const std::string& scenario_json, const std::string& effect_json) {
    const SimulationScenario sc = io::parse_scenario(scenario_json);
    return r_squared_limit_oracle(sc.true_effect, io::parse_effect(effect_json), sc);
  });
}

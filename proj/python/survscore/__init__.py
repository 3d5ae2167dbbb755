"""Score-process diagnostics and temporal-effect selection for survival data.

Candidates, effects, scenarios and analyses use the same JSON schemas as the
command-line tool; pass them as Python dicts and lists.
"""

import json as _json

from ._core import (
    AnalysisError,
    Dataset,
    DegenerateData,
    Error,
    InputError,
    ScoreProcessTrace,
    TransformedDataset,
    __version__,
    count_informative_failures,
    kolmogorov_cdf,
    kolmogorov_quantile,
    rank_time_map,
    score_process,
    time_transform,
)
from . import _core

__all__ = [
    "AnalysisError",
    "Dataset",
    "DegenerateData",
    "Error",
    "InputError",
    "ScoreProcessTrace",
    "TransformedDataset",
    "__version__",
    "count_informative_failures",
    "fit",
    "kolmogorov_cdf",
    "kolmogorov_quantile",
    "r_squared",
    "r_squared_limit",
    "rank_time_map",
    "run_replications",
    "score_process",
    "select",
    "simulate_dataset",
    "time_transform",
]


def _transformed(data):
    return data if isinstance(data, TransformedDataset) else time_transform(data)


def fit(data, components, name="model"):
    """Maximum partial likelihood fit of one candidate.

    `components` is a list of basis specs, one per covariate, e.g.
    [{"basis": "changepoint", "t0": 0.5, "ratio": "auto"}].
    """
    spec = [{"name": name, "components": list(components)}]
    return _json.loads(_core._fit(_transformed(data), _json.dumps(spec)))


def select(data, candidates):
    """Fits every candidate and ranks them by R2 (best first)."""
    return _json.loads(_core._select(_transformed(data), _json.dumps(candidates)))


def r_squared(data, effect):
    """R2 of a temporal effect given as {"components": [...]} or a number."""
    return _core._r_squared(_transformed(data), _json.dumps(effect))


def simulate_dataset(scenario):
    return _core._simulate_dataset(_json.dumps(scenario))


def run_replications(scenario, replicates, analyses=("band",), threads=0):
    """Replicated study; returns the report as a dict."""
    return _json.loads(
        _core._run_replications(_json.dumps(scenario), replicates, _json.dumps(list(analyses)), threads)
    )


def r_squared_limit(scenario, effect):
    """Large-sample R2 of `effect` under the scenario's true effect."""
    return _core._r_squared_limit(_json.dumps(scenario), _json.dumps(effect))

"""Haar and shearlet dictionaries, epsilon-nets and max-coefficient detection."""

import json as _json

from ._shearnet import *  # noqa: F401,F403
from ._shearnet import Dictionary, run_experiment as _run_experiment, run_gaussian_max_bound as _run_max_bound


def manifest(dictionary: Dictionary) -> dict:
    return _json.loads(dictionary.manifest_json())


def experiment(kind: str, config: dict) -> dict:
    """Run an experiment from a config dict; returns the report as a dict."""
    return _json.loads(_run_experiment(kind, _json.dumps(config)))


def gaussian_max_bound(m: int, trials: int, seed: int = 0) -> dict:
    return _json.loads(_run_max_bound(m, trials, seed))

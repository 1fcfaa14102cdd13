"""Gaussian smoothing bounds for cadlag process approximation."""

import json
from pathlib import Path

from . import _core
from ._core import (
    Error,
    bm_max_cdf,
    bm_supnorm_tail,
    c_eps_delta_T,
    derivative_constant,
    normal_cdf,
    p2_partitions,
    rate_exponents,
    read_path_csv,
    sample_bm,
    write_path_csv,
)

__all__ = [
    "Error",
    "bm_max_cdf",
    "bm_supnorm_tail",
    "bound",
    "c_eps_delta_T",
    "derivative_constant",
    "normal_cdf",
    "optimize",
    "p2_partitions",
    "rate_exponents",
    "rates",
    "read_path_csv",
    "sample_bm",
    "simulate_partial_sum",
    "smooth",
    "validate",
    "write_path_csv",
]


def _config(config):
    """Accepts a dict, a JSON string or a path to a JSON file; returns (text, base_dir)."""
    if isinstance(config, dict):
        return json.dumps(config), ""
    if isinstance(config, Path) or (isinstance(config, str) and not config.lstrip().startswith("{")):
        path = Path(config)
        return path.read_text(), str(path.parent)
    return config, ""


def rates(p, horizon=1.0, n=1e6):
    return json.loads(_core.rates_json(p, horizon, n))


def bound(config, workers=0):
    text, base = _config(config)
    return json.loads(_core.bound_json(text, False, workers, base))


def optimize(config, workers=0):
    text, base = _config(config)
    return json.loads(_core.bound_json(text, True, workers, base))


def smooth(config, workers=0):
    text, base = _config(config)
    return json.loads(_core.smooth_json(text, workers, base))


def simulate_partial_sum(model, seed, index=0, horizon=1.0):
    return _core.simulate_partial_sum(json.dumps(model), seed, index, horizon)


def validate(suite="all", seed=0, budget_scale=1.0, workers=0, out=""):
    result = _core.validate(suite, seed, budget_scale, workers, str(out))
    result["report"] = json.loads(result["report"])
    return result

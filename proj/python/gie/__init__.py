"""Python bindings for the gie numerical core."""

import json as _json

from ._gie_core import *  # noqa: F401,F403
from ._gie_core import (
    ConvergenceError,
    IoError,
    RegimeError,
    ValidationError,
    __version__,
)
from ._gie_core import run_config as _run_config
from ._gie_core import run_experiment as _run_experiment


def run_experiment(name, params=None, tolerances=None, seed=1, threads=0):
    """Run a registered experiment and return its result record as a dict.

    Parameter and tolerance values may be numbers or strings.
    """
    p = {k: str(v) for k, v in (params or {}).items()}
    t = {k: str(v) for k, v in (tolerances or {}).items()}
    return _json.loads(_run_experiment(name, p, t, seed, threads))


def run_config(path):
    """Run a configuration file; returns (exit_code, record dict)."""
    code, text = _run_config(str(path))
    return code, _json.loads(text)


__all__ = [
    "ConvergenceError",
    "IoError",
    "RegimeError",
    "ValidationError",
    "__version__",
    "run_config",
    "run_experiment",
]

"""Ground states of the fractional Lane-Emden problem on a ball."""

import json

from ._fraclane import (
    CoercivityError,
    ConfigError,
    ConvergenceError,
    Error,
    FracParams,
    GroundState,
    InvalidArgument,
    SpectrumEntry,
    SpectrumResult,
    cns_constant,
    first_eigenvalue,
    full_spectrum,
    ground_state,
    make_params,
    oracle_image,
)
from . import _fraclane


def _text(config):
    return config if isinstance(config, str) else json.dumps(config)


def run(config=None):
    """Runs the check pipeline; config is a dict or JSON text. Returns the report dict."""
    return json.loads(_fraclane._run_json(_text(config or {})))


def sweep(config):
    """Runs a parameter sweep; returns the sweep dict."""
    return json.loads(_fraclane._sweep_json(_text(config)))


__all__ = [
    "CoercivityError",
    "ConfigError",
    "ConvergenceError",
    "Error",
    "FracParams",
    "GroundState",
    "InvalidArgument",
    "SpectrumEntry",
    "SpectrumResult",
    "cns_constant",
    "first_eigenvalue",
    "full_spectrum",
    "ground_state",
    "make_params",
    "oracle_image",
    "run",
    "sweep",
]

"""Leader-following consensus over prime fields."""

import json

from ._core import (
    ConfigError,
    SynthesisError,
    char_poly,
    deadbeat_gain,
    is_irreducible,
    is_nilpotent,
    is_stabilizable,
    nilpotent_degree,
    order_of_x_mod,
    rank,
)
from . import _core

__all__ = [
    "ConfigError",
    "SynthesisError",
    "analyze",
    "char_poly",
    "cycle_structure",
    "deadbeat_gain",
    "is_irreducible",
    "is_nilpotent",
    "is_stabilizable",
    "kalman_decompose",
    "nilpotent_degree",
    "order_of_x_mod",
    "rank",
    "simulate",
    "synthesize",
]


def _config_text(config):
    return config if isinstance(config, str) else json.dumps(config)


def cycle_structure(a, p, method="enumeration"):
    """Cycle lengths, tree depth and state counts of x -> A x over F_p."""
    return json.loads(_core._cycle_structure(a, p, method))


def kalman_decompose(a, b, p):
    return json.loads(_core._kalman_decompose(a, b, p))


def analyze(config):
    """Analysis report for a scenario given as a dict or JSON text."""
    return json.loads(_core._analyze(_config_text(config)))


def synthesize(config):
    """Deadbeat gain for the scenario; raises SynthesisError when none is certified."""
    return json.loads(_core._synthesize(_config_text(config)))


def simulate(config, horizon, seed=0, with_states=False):
    return json.loads(_core._simulate(_config_text(config), horizon, seed, with_states))

"""Python front end for the nehari radial solver.

Parameters and solver settings are plain dicts with the same keys as the
JSON config files; fields are 1-D numpy arrays sampled on a Grid.
"""

import json

from ._core import (
    ConfigError,
    ConvergenceError,
    DomainError,
    GeometryViolation,
    Grid,
    GridMismatchError,
    NehariError,
    NoRootError,
    SolverFailure,
    StalePointError,
    a_lambda,
    bubble,
    bubble_window_grid,
    build_grid,
    s_lambda,
    sample_bubble,
    semi_trivial_energy,
    sigma_infimum,
    sobolev_constant,
)
from . import _core

__all__ = [
    "ConfigError", "ConvergenceError", "DomainError", "GeometryViolation", "Grid", "GridMismatchError",
    "NehariError", "NoRootError", "SolverFailure", "StalePointError",
    "a_lambda", "bubble", "bubble_window_grid", "build_grid", "s_lambda", "sample_bubble",
    "semi_trivial_energy", "sigma_infimum", "sobolev_constant",
    "energy", "project", "classify", "minimize", "mountain_pass", "ps_thresholds", "mass_accounting",
    "run_config",
]


def _dump(d):
    return json.dumps(d or {})


def energy(grid, u, v, params, positive_part=False):
    """Energy report (J or J+) for the pair (u, v)."""
    return json.loads(_core._energy(grid, u, v, _dump(params), positive_part))


def project(grid, u, v, params, positive_part=False):
    """Nehari projection; returns (u, v, t_star, residual)."""
    return _core._project(grid, u, v, _dump(params), positive_part)


def classify(which, params, n_directions=12, step=0.05):
    """LocalMin / Saddle / Inconclusive verdict for a semi-trivial point ("first" or "second")."""
    return json.loads(_core._classify(which, _dump(params), n_directions, step))


def minimize(grid, u, v, params, descent=None):
    """Constrained descent from (u, v). Returns (summary dict, (u, v))."""
    summary, fields = _core._minimize(grid, u, v, _dump(params), _dump(descent))
    return json.loads(summary), fields


def mountain_pass(params, grid, config=None):
    """String-method mountain pass. Returns (summary dict, (u, v))."""
    summary, fields = _core._mountain_pass(_dump(params), _dump(config), grid)
    return json.loads(summary), fields


def ps_thresholds(params):
    return json.loads(_core._ps_thresholds(_dump(params)))


def mass_accounting(grid, u, v, eps=1e-3, R=1e3):
    return json.loads(_core._mass_accounting(grid, u, v, eps, R))


def run_config(config, overrides=()):
    """Run a scenario from a config dict or JSON text without writing files."""
    text = config if isinstance(config, str) else json.dumps(config)
    return json.loads(_core._run_config(text, list(overrides)))

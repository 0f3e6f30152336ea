"""Numerical toolkit for the mean-field equation with conic singularities.

The package solves the Liouville-type problem ``Delta u + V e^u = 0`` on the
unit disk for conformal densities ``V`` carrying one negative conic point and
any number of positive ones, and verifies the analytic machinery attached to
it at desk scale: the weighted isoperimetric (Bol) inequality, level-set
distribution functions, weighted symmetrization, eigenvalue thresholds of the
linearized operator at weighted masses ``4*pi*(1-alpha0)`` and
``8*pi*(1-alpha0)``, Kelvin transforms of global solutions, and continuation
of the solution branch in the mass parameter.
"""

import importlib as _importlib

_SUBMODULES = (
    "bol",
    "cli",
    "config",
    "continuation",
    "errors",
    "kelvin",
    "levelset",
    "mesh",
    "model",
    "rearrange",
    "solver",
    "spectrum",
    "weights",
)

__all__ = list(_SUBMODULES)
__version__ = "0.1.0"


def __getattr__(name):
    if name in _SUBMODULES:
        return _importlib.import_module(f"conemf.{name}")
    raise AttributeError(f"module 'conemf' has no attribute {name!r}")

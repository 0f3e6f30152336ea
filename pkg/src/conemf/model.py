"""Closed-form radial reference objects used as ground truth everywhere else.

For a cone index ``alpha`` in [0, 1) the reference profile

    u0(r) = -2*log(1 + r^(2*(1-alpha))) + log(8*(1-alpha)^2)

solves ``Delta u0 + r^(-2*alpha) * e^(u0) = 0`` on the punctured plane, and

    psi(r) = 2*(1-alpha) * (1 - r^(2*(1-alpha))) / (1 + r^(2*(1-alpha)))

spans the kernel of the linearization around it (it is the derivative of the
dilation family).  The weighted measure ``r^(-2*alpha) e^(u0) dx`` has the
exact ball masses computed by :func:`model_mass`, whose closed-form inverse
drives all symmetrization code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from conemf.errors import GridTooCoarse, MassOverflow


@dataclass(frozen=True)
class RadialModel:
    """Radial reference configuration with a single cone of index alpha at 0."""

    alpha: float

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha}")

    @property
    def exponent(self) -> float:
        """Power 2*(1-alpha) governing the radial substitution t = r**exponent."""
        return 2.0 * (1.0 - self.alpha)

    @property
    def total_mass(self) -> float:
        return 8.0 * math.pi * (1.0 - self.alpha)


def u0(model: RadialModel, r):
    """Reference profile at radius r >= 0 (scalar or array)."""
    r = np.asarray(r, dtype=float)
    t = r**model.exponent
    val = -2.0 * np.log1p(t) + math.log(8.0 * (1.0 - model.alpha) ** 2)
    return val if val.ndim else float(val)


def u0_radial_derivative(model: RadialModel, r):
    """d/dr of the reference profile; behaves like r^(1-2*alpha) near 0."""
    r = np.asarray(r, dtype=float)
    a = model.exponent
    t = r**a
    val = -2.0 * a * t / (r * (1.0 + t))
    return val if val.ndim else float(val)


def model_mass(model: RadialModel, R) -> float:
    """Weighted mass of the centered ball B_R, exact closed form.

    integral over B_R of r^(-2*alpha) e^(u0) dx
        = 8*pi*(1-alpha) * R^(2*(1-alpha)) / (1 + R^(2*(1-alpha))),
    equal to 4*pi*(1-alpha) at R = 1 and 8*pi*(1-alpha) as R -> inf.
    """
    if R == math.inf:
        return model.total_mass
    t = float(R) ** model.exponent
    return model.total_mass * t / (1.0 + t)


def mass_inverse(model: RadialModel, mass: float) -> float:
    """Radius of the centered ball holding the given weighted mass.

    Inverse of :func:`model_mass`; returns inf at the total mass and raises
    MassOverflow beyond it.
    """
    total = model.total_mass
    if mass < 0.0:
        raise ValueError(f"mass must be nonnegative, got {mass}")
    if mass >= total:
        if mass <= total * (1.0 + 1e-12):
            return math.inf
        raise MassOverflow(f"mass {mass} exceeds the total model mass {total}")
    if mass == 0.0:
        return 0.0
    t = mass / (total - mass)
    return t ** (1.0 / model.exponent)


def psi(model: RadialModel, r):
    """Kernel profile of the linearized operator; positive iff r < 1."""
    r = np.asarray(r, dtype=float)
    t = r**model.exponent
    val = 2.0 * (1.0 - model.alpha) * (1.0 - t) / (1.0 + t)
    return val if val.ndim else float(val)


def psi_radial_derivative(model: RadialModel, r):
    r = np.asarray(r, dtype=float)
    a = model.exponent
    t = r**a
    val = -4.0 * (1.0 - model.alpha) * a * t / (r * (1.0 + t) ** 2)
    return val if val.ndim else float(val)


def density(model: RadialModel, r):
    """Radial density r^(-2*alpha) e^(u0(r)) of the model measure (w.r.t. dx)."""
    r = np.asarray(r, dtype=float)
    t = r**model.exponent
    val = r ** (-2.0 * model.alpha) * 8.0 * (1.0 - model.alpha) ** 2 / (1.0 + t) ** 2
    return val if val.ndim else float(val)


def dilation_solution(model: RadialModel, delta: float):
    """Member u(r) = u0(delta*r) + 2*(1-alpha)*log(delta) of the dilation family.

    Every member solves the same equation Delta u + r^(-2*alpha) e^u = 0;
    differentiating in log(delta) at delta = 1 produces psi.  Used as a
    boundary-value oracle for the nonlinear solver.
    """
    if delta <= 0.0:
        raise ValueError("dilation parameter must be positive")
    shift = model.exponent * math.log(delta)

    def u(r):
        return u0(model, np.asarray(r, dtype=float) * delta) + shift

    return u


def radial_grid(model: RadialModel, r_min: float, r_max: float, n: int):
    """Strictly increasing radial grid adapted to the model measure.

    Nodes are uniform in sigma = t/(1+t) with t = r^(2*(1-alpha)), the
    variable in which all model integrals are smooth on a finite interval;
    this removes both the origin singularity and the slow tail.
    """
    if not 0.0 < r_min < r_max:
        raise ValueError("need 0 < r_min < r_max")
    if n < 2:
        raise ValueError("need at least two nodes")
    a = model.exponent
    t_lo, t_hi = r_min**a, r_max**a
    sigma = np.linspace(t_lo / (1.0 + t_lo), t_hi / (1.0 + t_hi), n)
    t = sigma / (1.0 - sigma)
    return t ** (1.0 / a)


def radial_residual(model: RadialModel, r, values, mode: str = "linear") -> float:
    """Max-norm residual of the radial operator on a sampled field.

    mode 'linear' checks (1/r)(r f')' + r^(-2*alpha) e^(u0) f  (kernel-type
    fields), mode 'exp' checks (1/r)(r f')' + r^(-2*alpha) e^f (solution-type
    fields).  Uses centered second-order differences on the strictly
    increasing grid ``r``, which must exclude the origin.

    Returns the maximum absolute residual over interior nodes.
    """
    r = np.asarray(r, dtype=float)
    f = np.asarray(values, dtype=float)
    if r.size < 8:
        raise GridTooCoarse(f"need at least 8 radial nodes, got {r.size}")
    if r[0] <= 0.0 or np.any(np.diff(r) <= 0.0):
        raise ValueError("grid must be strictly increasing and exclude r = 0")
    if mode not in ("linear", "exp"):
        raise ValueError(f"unknown mode {mode!r}")

    h1 = r[1:-1] - r[:-2]
    h2 = r[2:] - r[1:-1]
    fm, f0, fp = f[:-2], f[1:-1], f[2:]
    d1 = (-h2 / (h1 * (h1 + h2))) * fm + ((h2 - h1) / (h1 * h2)) * f0 + (
        h1 / (h2 * (h1 + h2))
    ) * fp
    d2 = 2.0 * (fm / (h1 * (h1 + h2)) - f0 / (h1 * h2) + fp / (h2 * (h1 + h2)))
    rad = r[1:-1]
    laplace = d2 + d1 / rad
    if mode == "linear":
        residual = laplace + density(model, rad) * f0
    else:
        residual = laplace + rad ** (-2.0 * model.alpha) * np.exp(f0)
    return float(np.max(np.abs(residual)))

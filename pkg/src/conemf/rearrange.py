"""Weighted symmetrization onto the radial model measure.

A field phi with weighted node masses is transported to the radial profile
that is equimeasurable with respect to the model measure
``r^(-2*alpha) e^(u0) dx``: sort values decreasingly, accumulate masses, and
invert the closed-form ball mass for the radii.  The one-sided variant
requires a positive field (zero trace) and fills centered balls; the
two-sided variant transports the whole range, gluing the positive part on
[0, R1] and the rest onto the annulus up to R2 (possibly infinite).  Both are
the same monotone transport; the split only changes the bookkeeping checks.

Super-level measures and transported integrals use the exact staircase, so
equimeasurability holds to rounding; Dirichlet energies compare the piecewise
linear profile (plateaus carry zero slope) against the input energy.

The constrained minimization of the radial Dirichlet quotient under the
model-weighted zero-mean and unit-norm constraints reduces, in the variables
t = r^(2-2*alpha), sigma = t/(1+t), to the second eigenvalue of the
Legendre-type pencil  -(sigma(1-sigma) psi')' = 2*K*psi  on [0, 1]; the
zero-mean constraint is exactly M-orthogonality to the constant kernel
vector, so no explicit projection is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from conemf.errors import MassOverflow, NoSignChange, SignError
from conemf.model import RadialModel, mass_inverse, model_mass
from conemf.solver import GridField


@dataclass(frozen=True)
class RadialField:
    """Radial profile samples (r increasing, one value per radius)."""

    r: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "r", np.asarray(self.r, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if self.r.ndim != 1 or self.r.shape != self.values.shape:
            raise ValueError("r and values must be matching 1-d arrays")
        if np.any(np.diff(self.r) <= 0):
            raise ValueError("radii must be strictly increasing")

    def energy(self) -> float:
        """Dirichlet energy of the piecewise-linear radial interpolant."""
        return pl_radial_energy(self.r, self.values)


def radial_ball_masses(model: RadialModel, r, include_tail: bool = False):
    """Exact model masses of the rings (r_{k-1}, r_k], the first from 0.

    With these masses the cumulative sums are exactly model_mass(r_k), so a
    decreasing radial field rearranges onto its own radii (fixed point).
    ``include_tail`` lumps the mass beyond r[-1] onto the last node, making
    the measure total the full plane mass.
    """
    r = np.asarray(r, dtype=float)
    cums = np.array([model_mass(model, rk) for rk in r])
    masses = np.diff(np.concatenate([[0.0], cums]))
    if include_tail:
        masses[-1] += model.total_mass - cums[-1]
    return masses


@dataclass(frozen=True)
class RearrangedField:
    """Decreasing radial transport of a field onto the model measure.

    ``radii``/``values`` are the staircase corners: the rearranged field
    equals values[k] on the ring (radii[k-1], radii[k]].  The last radius may
    be inf (two-sided transport exhausting the model mass); the field is
    constant there.  R0/R1/R2 summarize the geometry: R0 the outer radius of
    a one-sided transport, R1 the zero-level radius and R2 the outer radius
    of a two-sided one.
    """

    model: RadialModel
    kind: str                   # 'one-sided' | 'two-sided'
    values: np.ndarray          # decreasing
    masses: np.ndarray
    radii: np.ndarray           # increasing staircase corners (cumulative)
    R0: float
    R1: float
    R2: float

    @property
    def alpha(self) -> float:
        return self.model.alpha

    def measure_superlevel(self, t: float) -> float:
        """Model measure of {rearranged > t}; exact staircase arithmetic."""
        k = int(np.searchsorted(-self.values, -t, side="left"))
        return float(np.cumsum(self.masses)[k - 1]) if k > 0 else 0.0

    def transported_integral(self, fn) -> float:
        """Integral of fn(value) against the model measure (exact transport)."""
        return float(np.dot(self.masses, fn(self.values)))

    def profile(self) -> RadialField:
        """Piecewise-linear profile through the staircase corners.

        A leading corner at r = 0 carries the top value (plateau over the
        innermost ball); an infinite last radius is dropped (the field is
        constant beyond the previous corner, contributing zero energy).
        """
        r = np.concatenate([[0.0], self.radii])
        v = np.concatenate([[self.values[0]], self.values])
        finite = np.isfinite(r)
        return RadialField(r[finite], v[finite])

    def energy(self) -> float:
        return self.profile().energy()


def pl_radial_energy(radii, values) -> float:
    """Dirichlet energy of a piecewise-linear radial field, plateaus excluded."""
    r = np.asarray(radii, dtype=float)
    v = np.asarray(values, dtype=float)
    dr = np.diff(r)
    dv = np.diff(v)
    good = dr > 0
    slopes2 = np.zeros_like(dr)
    slopes2[good] = (dv[good] / dr[good]) ** 2
    ring = math.pi * (r[1:] ** 2 - r[:-1] ** 2)
    return float(np.dot(ring, slopes2))


def dirichlet_energy(field: GridField) -> float:
    """Dirichlet energy of a P1 mesh field."""
    K = field.mesh.stiffness()
    return float(field.values @ (K @ field.values))


def _sorted_transport(values, masses, model: RadialModel):
    values = np.asarray(values, dtype=float)
    masses = np.asarray(masses, dtype=float)
    order = np.argsort(-values, kind="stable")
    v = values[order]
    m = masses[order]
    cum = np.cumsum(m)
    total = float(cum[-1])
    if total > model.total_mass * (1.0 + 1e-12):
        raise MassOverflow(
            f"mass {total} exceeds the model total {model.total_mass}"
        )
    radii = np.array([mass_inverse(model, c) for c in np.minimum(cum, model.total_mass)])
    return v, m, radii, total


def rearrange_one_sided(phi, masses, alpha: float, region_mask=None) -> RearrangedField:
    """Decreasing rearrangement of a positive field onto centered balls.

    ``phi`` is a GridField or RadialField; ``masses`` are its weighted node
    masses (the measure V e^w used for the level sets).  The field must be
    positive on the region interior; the zero boundary layer (mask off or
    value 0) is not transported.
    """
    model = RadialModel(alpha)
    if isinstance(phi, (GridField, RadialField)):
        values = phi.values
    else:
        values = np.asarray(phi, dtype=float)
    masses = np.asarray(masses, dtype=float)
    if region_mask is not None:
        mask = np.asarray(region_mask, dtype=bool)
        values = values[mask]
        masses = masses[mask]
    keep = values != 0.0
    if np.any(values[keep] < 0.0):
        raise SignError("one-sided rearrangement needs a positive field")
    v, m, radii, total = _sorted_transport(values[keep], masses[keep], model)
    R0 = float(radii[-1]) if radii.size else 0.0
    return RearrangedField(model=model, kind="one-sided", values=v, masses=m,
                           radii=radii, R0=R0, R1=R0, R2=R0)


def rearrange_two_sided(phi, masses, c0: float, alpha: float,
                        region_mask=None) -> RearrangedField:
    """Two-sided transport: positive part to [0, R1], the rest to [R1, R2).

    ``c0 <= 0`` is the limit value of the field at the outer end (metadata
    for the gluing checks).  The transport is the global monotone one, so
    equimeasurability and the transported integrals hold on both pieces at
    once.  R2 = inf when the input mass exhausts the model total; more than
    that raises MassOverflow.
    """
    if c0 > 0.0:
        raise ValueError("outer limit value c0 must be <= 0")
    model = RadialModel(alpha)
    if isinstance(phi, (GridField, RadialField)):
        values = phi.values
    else:
        values = np.asarray(phi, dtype=float)
    masses = np.asarray(masses, dtype=float)
    if region_mask is not None:
        mask = np.asarray(region_mask, dtype=bool)
        values = values[mask]
        masses = masses[mask]
    v, m, radii, total = _sorted_transport(values, masses, model)
    pos = v > 0.0
    mass_pos = float(m[pos].sum())
    R1 = mass_inverse(model, mass_pos)
    R2 = float(radii[-1]) if radii.size else 0.0
    return RearrangedField(model=model, kind="two-sided", values=v, masses=m,
                           radii=radii, R0=R1, R1=float(R1), R2=R2)


@dataclass(frozen=True)
class KStarResult:
    """Constrained minimum of the radial Dirichlet quotient.

    kstar is the minimum of integral(|grad psi|^2) over radial psi with
    model-weighted zero mean and unit norm; xi0 the sign-change radius of
    the minimizer.
    """

    kstar: float
    minimizer: RadialField
    xi0: float
    sigma_grid: np.ndarray

    def __iter__(self):
        return iter((self.kstar, self.minimizer, self.xi0))


def kstar_minimize(alpha: float, grid) -> KStarResult:
    """Minimize the Dirichlet energy under model-weighted constraints.

    ``grid`` is a radial grid spanning at least [1e-3, 1e3] (after the
    t-substitution the integrals are smooth, so the grid from
    model.radial_grid is the natural choice).  In sigma = t/(1+t) the
    problem is the pencil S x = 2K M x with S the sigma(1-sigma)-weighted
    stiffness and M the mass matrix; the constant function spans the zero
    eigenspace, and the zero-mean constraint is M-orthogonality to it, so
    the constrained minimum is half the second eigenvalue.
    """
    model = RadialModel(alpha)
    r = np.asarray(grid, dtype=float)
    if r.ndim != 1 or r.size < 8 or np.any(np.diff(r) <= 0) or r[0] <= 0:
        raise ValueError("grid must be an increasing positive array with >= 8 nodes")
    if r[0] > 1e-3 or r[-1] < 1e3:
        raise ValueError("grid must span at least [1e-3, 1e3]")
    a = model.exponent
    t = r**a
    sigma = t / (1.0 + t)
    h = np.diff(sigma)

    def antideriv(x):
        return x**2 / 2.0 - x**3 / 3.0

    w_e = (antideriv(sigma[1:]) - antideriv(sigma[:-1])) / h**2
    n = sigma.size
    main = np.zeros(n)
    main[:-1] += w_e
    main[1:] += w_e
    S = sp.diags([-w_e, main, -w_e], [-1, 0, 1], format="csc")
    m_main = np.zeros(n)
    m_main[:-1] += h / 3.0
    m_main[1:] += h / 3.0
    M = sp.diags([h / 6.0, m_main, h / 6.0], [-1, 0, 1], format="csc")

    try:
        vals, vecs = spla.eigsh(S, k=2, M=M, sigma=-0.1, which="LM")
    except spla.ArpackNoConvergence as exc:
        raise NoSignChange(f"eigen iteration failed: {exc}") from exc
    order = np.argsort(vals)
    lam2 = float(vals[order[1]])
    x = vecs[:, order[1]]
    if x[0] < 0:
        x = -x
    sign_flip = np.where(np.sign(x[:-1]) * np.sign(x[1:]) < 0)[0]
    if sign_flip.size == 0:
        raise NoSignChange("minimizer does not change sign; refine the grid")
    k = int(sign_flip[0])
    frac = x[k] / (x[k] - x[k + 1])
    sigma0 = sigma[k] + frac * (sigma[k + 1] - sigma[k])
    xi0 = (sigma0 / (1.0 - sigma0)) ** (1.0 / a)

    # normalize to unit model-weighted norm: 4*pi*kappa*int psi^2 dsigma = 1
    kappa = a
    nrm = math.sqrt(4.0 * math.pi * kappa * float(x @ (M @ x)))
    x = x / nrm
    return KStarResult(kstar=0.5 * lam2, minimizer=RadialField(r, x),
                       xi0=float(xi0), sigma_grid=sigma)


def kstar_euler_lagrange_residual(result: KStarResult, alpha: float) -> float:
    """Max residual of -(sigma(1-sigma) psi')' = 2*K* psi at interior nodes."""
    sigma = result.sigma_grid
    x = result.minimizer.values
    h1 = sigma[1:-1] - sigma[:-2]
    h2 = sigma[2:] - sigma[1:-1]
    mid_lo = 0.5 * (sigma[:-2] + sigma[1:-1])
    mid_hi = 0.5 * (sigma[1:-1] + sigma[2:])
    flux_lo = mid_lo * (1 - mid_lo) * (x[1:-1] - x[:-2]) / h1
    flux_hi = mid_hi * (1 - mid_hi) * (x[2:] - x[1:-1]) / h2
    lap = (flux_hi - flux_lo) / (0.5 * (h1 + h2))
    res = -lap - 2.0 * result.kstar * x[1:-1]
    return float(np.max(np.abs(res)) / max(np.max(np.abs(x)), 1e-300))

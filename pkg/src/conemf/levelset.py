"""Distribution-function machinery of the isoperimetric argument.

Given a solution u on a subregion, the harmonic lift q matches u on the
region boundary; eta = u - q then solves ``Delta eta + (V e^q) e^eta = 0``
with zero trace.  The super-level sets Omega(t) = {eta > t} carry the
weighted measure mu(t) = integral of V e^q over Omega(t); its inverse
eta*(s), the layer integral F(s) = integral_0^s exp(eta*(b)) db, and the
combination

    P(s) = 4*pi*(1-alpha0) * (s F'(s) - F(s)) + F(s)^2 / 2

drive the weighted isoperimetric inequality: P is nondecreasing, and the
endpoint gap 2*(P(mu(0)) - P(0)) = 8*pi*(1-alpha0)*(mu(0) - M) + M^2 is
nonnegative with equality exactly in the symmetric single-cone case.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from conemf.errors import DisconnectedRegion, EmptyRegion, NonMonotoneMu
from conemf.solver import GridField

import scipy.sparse.linalg as spla


@dataclass(frozen=True)
class LevelSetProfile:
    """Sampled distribution functions of a nonnegative field.

    ``t_samples`` decrease from t_m to 0; ``mu`` is the weighted measure of
    {eta > t} at each sample (so it increases along the list).  ``s_samples``
    is the induced grid on [0, mu(0)]; ``eta_star`` its generalized inverse
    values; ``F`` the cumulative trapezoid of exp(eta_star).
    """

    t_samples: np.ndarray
    mu: np.ndarray
    s_samples: np.ndarray
    eta_star: np.ndarray
    F: np.ndarray
    t_m: float

    @property
    def total_mass(self) -> float:
        return float(self.mu[-1])

    @property
    def layer_total(self) -> float:
        """F at mu(0): the weighted integral of e^eta over the region."""
        return float(self.F[-1])

    def csv_tables(self):
        """(t, mu) rows and (s, eta_star, F, P) rows for export."""
        tm = np.stack([self.t_samples, self.mu], axis=1)
        P = profile_p(self)
        sf = np.stack([self.s_samples, self.eta_star, self.F, P], axis=1)
        return tm, sf


@dataclass(frozen=True)
class IdentityReport:
    """Residuals of the exact relations a profile must satisfy."""

    fprime_residual: float      # max |dF/ds - exp(eta*)| over interior samples
    p_min_increment: float      # min forward difference of P (>= -tol expected)
    p_range: float              # max |P|, the scale for the monotonicity check
    lipschitz_ratio: float      # max local |d eta*/ds| on the middle band
    endpoint_gap: float         # 8 pi (1-a0) (mu(0) - M) + M^2


def harmonic_lift(solution: GridField, region_mask) -> GridField:
    """Discrete-harmonic extension of the solution's trace on a node subset.

    Nodes of the region adjacent to its complement (or lying on the global
    mesh boundary) keep the solution values; the remaining region nodes get
    the discrete-harmonic fill-in.  Values outside the region are copied
    from the solution so the result is a full-mesh field.
    """
    mesh = solution.mesh
    mask = np.asarray(region_mask, dtype=bool)
    if not mask.any():
        raise EmptyRegion("region has no nodes")
    if not mesh.subset_connected(mask):
        raise DisconnectedRegion("harmonic lift needs a connected region")
    adj = mesh.adjacency()
    touches_outside = np.asarray(adj[:, ~mask].sum(axis=1)).ravel() > 0
    rim = mask & (touches_outside | mesh.boundary)
    inner = mask & ~rim
    q = solution.values.copy()
    if inner.any():
        K = mesh.stiffness()
        K_ii = K[inner][:, inner].tocsc()
        rhs = -K[inner][:, rim] @ solution.values[rim]
        q[inner] = spla.spsolve(K_ii, rhs)
    return GridField(mesh, q)


def node_masses(mesh, alpha: float, density) -> np.ndarray:
    """Consistent node masses of a weighted density (P1 partition of unity).

    ``density`` is a callable of coordinates or values at the rule points of
    ``mesh.rule(alpha)``; the masses sum to the exact integral.
    """
    rule = mesh.rule(alpha=alpha)
    return mesh.weighted_load(rule, density)


def build_profile(eta: GridField, weight, region_mask) -> LevelSetProfile:
    """Distribution functions of eta >= 0 against a weighted node measure.

    ``weight`` is either a GridField of densities (masses = value * node
    area) or a raw array of node masses, e.g. from :func:`node_masses` when
    the measure carries the conic weight.  Level samples are the sorted
    distinct nodal values of eta on the region, so mu is exact for the
    discrete measure with no sampling bias.
    """
    mask = np.asarray(region_mask, dtype=bool)
    if not mask.any():
        raise EmptyRegion("region has no nodes")
    if isinstance(weight, GridField):
        masses = weight.values * eta.mesh.node_weights
    else:
        masses = np.asarray(weight, dtype=float)
    masses = masses[mask]
    vals = eta.values[mask]

    t_m = float(vals.max())
    levels = np.unique(vals[vals > 0.0])[::-1]
    t_samples = np.concatenate([levels, [0.0]])

    order = np.argsort(vals)[::-1]
    sorted_vals = vals[order]
    cum = np.cumsum(masses[order])
    # mu(t) = mass of {eta > t}: count strictly greater via searchsorted
    counts = np.searchsorted(-sorted_vals, -t_samples, side="left")
    mu = np.where(counts > 0, cum[np.maximum(counts - 1, 0)], 0.0)
    # closure convention at the zero level: mu(0) is the mass of the whole
    # region (the discrete zero-trace layer has positive mass, unlike the
    # continuum boundary), so the profile ends at the exact region mass
    mu[-1] = float(cum[-1])
    if np.any(np.diff(mu) < 0.0):
        raise NonMonotoneMu("weighted measure decreased along decreasing levels")

    s_samples = mu
    eta_star = t_samples
    F = np.concatenate([[0.0], np.cumsum(
        0.5 * (np.exp(eta_star[1:]) + np.exp(eta_star[:-1])) * np.diff(s_samples))])
    return LevelSetProfile(t_samples=t_samples, mu=mu, s_samples=s_samples,
                           eta_star=eta_star, F=F, t_m=t_m)


def profile_p(profile: LevelSetProfile, alpha0: float | None = None) -> np.ndarray:
    """P(s) = 4 pi (1-alpha0) (s F'(s) - F(s)) + F(s)^2/2 with F' = exp(eta*)."""
    a0 = 0.0 if alpha0 is None else alpha0
    s, F = profile.s_samples, profile.F
    return (4.0 * np.pi * (1.0 - a0)) * (s * np.exp(profile.eta_star) - F) + 0.5 * F**2


def check_identities(profile: LevelSetProfile, alpha0: float,
                     p_bins: int = 32) -> IdentityReport:
    """Residuals of dF/ds = exp(eta*), monotonicity of P, and the endpoint gap."""
    s, F, es = profile.s_samples, profile.F, profile.eta_star
    if s.size < 3 or s[-1] <= 0.0:
        return IdentityReport(0.0, 0.0, 0.0, 0.0, 0.0)
    # difference quotient per interval against eta* at the interval midpoint
    ds = np.diff(s)
    good = ds > 0
    fprime = np.diff(F)[good] / ds[good]
    es_mid = 0.5 * (es[1:] + es[:-1])[good]
    fres = float(np.max(np.abs(fprime - np.exp(es_mid)))) if good.any() else 0.0

    # P is evaluated on a mass-binned rebuild of the profile: the raw
    # staircase pairs single-node masses with local value gaps, so its
    # pointwise s*exp(eta*) term carries O(h) sawtooth jumps that are pure
    # order-statistics noise; bins spanning many nodes restore the measured
    # -ds/dt and with it the expected monotonicity margin
    idx = np.unique(np.searchsorted(s, np.quantile(s, np.linspace(0.0, 1.0, p_bins + 1))))
    idx = np.clip(idx, 0, s.size - 1)
    sb, eb = s[idx], es[idx]
    Fb = np.concatenate([[0.0], np.cumsum(
        0.5 * (np.exp(eb[1:]) + np.exp(eb[:-1])) * np.diff(sb))])
    a0f = 4.0 * np.pi * (1.0 - alpha0)
    P = a0f * (sb * np.exp(eb) - Fb) + 0.5 * Fb**2
    dP = np.diff(P)
    p_min = float(dP.min()) if dP.size else 0.0
    p_range = float(np.max(np.abs(P)))

    lo, hi = 0.1 * s[-1], 0.9 * s[-1]
    band = (s[:-1] >= lo) & (s[1:] <= hi) & (np.diff(s) > 0)
    lip = float(np.max(np.abs(np.diff(es))[band] / np.diff(s)[band])) if band.any() else 0.0

    M = profile.layer_total
    gap = 8.0 * np.pi * (1.0 - alpha0) * (profile.total_mass - M) + M**2
    return IdentityReport(fprime_residual=fres, p_min_increment=p_min,
                          p_range=p_range, lipschitz_ratio=lip,
                          endpoint_gap=float(gap))

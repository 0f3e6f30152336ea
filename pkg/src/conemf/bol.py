"""Two-sided evaluation of the weighted isoperimetric inequality.

For a solution of ``Delta w + V e^w = 0`` with a single negative cone of
index alpha0 inside the domain, every admissible subregion omega satisfies

    2 * L^2  >=  (8*pi*(1-alpha0) - M) * M,
    L = integral over the region boundary of (V e^w)^(1/2) ds,
    M = integral over the region of V e^w dx,

with equality exactly for centered balls of the symmetric single-cone
profile.  The Huber length-area inequality L^2 >= 4*pi*(1-alpha0)*M (constant
4*pi when the cone lies outside) is the building block and is checked
separately.

Boundary integrals use exact circle parametrizations or marching-triangle
level curves; area integrals use polar panel quadrature around the relevant
center with a Gauss-Jacobi first panel when the cone is inside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from conemf.errors import RegionNotInSolutionDomain
from conemf.solver import GridField
from conemf.weights import WeightField

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Region:
    """Subregion of the solution domain: ball, annulus, or super-level set."""

    kind: str                       # 'ball' | 'annulus' | 'superlevel'
    center: tuple = (0.0, 0.0)
    r_inner: float = 0.0
    r_outer: float = 0.0
    level: float = 0.0
    level_values: np.ndarray | None = None

    def node_mask(self, mesh):
        if self.kind == "superlevel":
            return np.asarray(self.level_values, dtype=float) > self.level
        d = np.hypot(mesh.nodes[:, 0] - self.center[0],
                     mesh.nodes[:, 1] - self.center[1])
        if self.kind == "ball":
            return d <= self.r_outer * (1.0 + 1e-12)
        return (d >= self.r_inner * (1.0 - 1e-12)) & (d <= self.r_outer * (1.0 + 1e-12))


def ball(center, radius) -> Region:
    return Region(kind="ball", center=(float(center[0]), float(center[1])),
                  r_outer=float(radius))


def annulus(center, r_inner, r_outer) -> Region:
    if not 0.0 < r_inner < r_outer:
        raise ValueError("need 0 < r_inner < r_outer")
    return Region(kind="annulus", center=(float(center[0]), float(center[1])),
                  r_inner=float(r_inner), r_outer=float(r_outer))


def superlevel(values, level) -> Region:
    return Region(kind="superlevel", level=float(level),
                  level_values=np.asarray(values, dtype=float))


@dataclass(frozen=True)
class BolReport:
    L: float
    M: float
    lhs: float                 # 2 L^2
    rhs: float                 # (8 pi (1-alpha0) - M) M
    slack: float               # lhs - rhs, nonnegative up to discretization
    equality_case: bool
    alpha0: float


@dataclass(frozen=True)
class HuberReport:
    L: float
    M: float
    constant: float            # 4 pi (1-alpha0) inside / 4 pi outside
    lhs: float                 # L^2
    rhs: float                 # constant * M
    slack: float
    subharmonic_ok: bool


def _circle_integral(fn, center, radius, n_seg, n_gauss=2):
    """Line integral of fn over a circle, Gauss points per arc segment."""
    xg, wg = roots_legendre(n_gauss)
    dphi = TWO_PI / n_seg
    phi0 = dphi * np.arange(n_seg)
    phi = phi0[:, None] + 0.5 * dphi * (xg[None, :] + 1.0)
    w = (0.5 * dphi * radius) * np.broadcast_to(wg, phi.shape)
    pts = np.stack([center[0] + radius * np.cos(phi).ravel(),
                    center[1] + radius * np.sin(phi).ravel()], axis=1)
    return float(np.dot(w.ravel(), fn(pts)))


def _radial_panels(R, n_panels):
    """Graded panel edges on [0, R] (quadratic clustering at 0)."""
    return R * (np.arange(n_panels + 1) / n_panels) ** 2.0


def _ball_mass(mesh, integrand, center, radius, alpha0, n_phi=None, n_panels=24):
    """Integral of ``integrand`` (callable of points) over a ball.

    The conic point sits at the mesh origin; the quadrature is arranged so
    the r^(-2*alpha0) factor is resolved whether the cone is at the ball
    center, strictly inside, or outside.  Boundaries through the cone are
    rejected.
    """
    ox, oy = mesh.origin
    d = math.hypot(center[0] - ox, center[1] - oy)
    if n_phi is None:
        n_phi = 4 * mesh.n_theta
    phi = TWO_PI * (np.arange(n_phi) + 0.5) / n_phi
    w_phi = TWO_PI / n_phi

    if alpha0 > 0.0 and abs(d - radius) < 1e-9 * max(1.0, radius):
        raise ValueError("region boundary passes through the conic point")

    sing_inside = alpha0 > 0.0 and d < radius
    if not sing_inside:
        # polar panels around the ball's own center; integrand smooth there
        edges = _radial_panels(radius, n_panels)
        xg, wg = roots_legendre(6)
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            r = 0.5 * (a + b) + 0.5 * (b - a) * xg
            wr = 0.5 * (b - a) * wg * r
            pts = np.stack([
                (center[0] + r[:, None] * np.cos(phi)).ravel(),
                (center[1] + r[:, None] * np.sin(phi)).ravel()], axis=1)
            vals = integrand(pts).reshape(r.size, n_phi)
            total += w_phi * float(np.sum(wr[:, None] * vals))
        return total

    # cone inside: integrate around the cone in polar coordinates with the
    # angular-dependent outer radius of the off-center circle
    phic = math.atan2(center[1] - oy, center[0] - ox)
    rho_out = d * np.cos(phi - phic) + np.sqrt(
        np.maximum(radius**2 - d**2 * np.sin(phi - phic) ** 2, 0.0))
    sfrac = _radial_panels(1.0, n_panels)
    total = 0.0
    for k in range(n_panels):
        a, b = sfrac[k], sfrac[k + 1]
        if k == 0:
            # Gauss-Jacobi on the innermost panel absorbs r^(-2*alpha0)
            xj, wj = roots_jacobi(8, 0.0, 1.0 - 2.0 * alpha0)
            s = 0.5 * (xj + 1.0) * b
            r = rho_out[None, :] * s[:, None]
            wq = (wj * 2.0 ** (-(2.0 - 2.0 * alpha0)) * b ** (2.0 - 2.0 * alpha0))[:, None] \
                * rho_out[None, :] ** 2 * (s[:, None] ** (2.0 * alpha0))
        else:
            xg, wg = roots_legendre(6)
            s = 0.5 * (a + b) + 0.5 * (b - a) * xg
            r = rho_out[None, :] * s[:, None]
            wq = (0.5 * (b - a) * wg)[:, None] * rho_out[None, :] ** 2 * s[:, None]
        pts = np.stack([(ox + r * np.cos(phi)[None, :]).ravel(),
                        (oy + r * np.sin(phi)[None, :]).ravel()], axis=1)
        vals = integrand(pts).reshape(r.shape)
        total += w_phi * float(np.sum(wq * vals))
    return total


def _check_coverage(mesh, region: Region):
    if region.kind == "superlevel":
        return
    ox, oy = mesh.origin
    d = math.hypot(region.center[0] - ox, region.center[1] - oy)
    if d + region.r_outer > mesh.radius * (1.0 + 1e-9):
        raise RegionNotInSolutionDomain(
            f"region extends to radius {d + region.r_outer:.6f}, mesh covers {mesh.radius:.6f}"
        )


def _v_callable(field=None, density=None):
    if (field is None) == (density is None):
        raise ValueError("pass exactly one of field / density")
    if field is not None:
        return lambda pts: field.evaluate(pts)
    return density


def bol_check(solution: GridField, region: Region, alpha0: float,
              field: WeightField | None = None, density=None,
              equality_tol: float = 1e-3, n_boundary: int | None = None) -> BolReport:
    """Evaluate both sides of the weighted isoperimetric inequality.

    ``solution`` holds w with Delta w + V e^w = 0 on a superset of the
    region; V is given exactly by ``field`` or ``density``, so only e^w is
    interpolated.
    """
    mesh = solution.mesh
    _check_coverage(mesh, region)
    V = _v_callable(field, density)

    def dens_ew(pts):
        return V(pts) * np.exp(mesh.interpolate(solution.values, pts))

    def dens_half(pts):
        return np.sqrt(V(pts)) * np.exp(0.5 * mesh.interpolate(solution.values, pts))

    n_seg = n_boundary if n_boundary is not None else max(256, 4 * mesh.n_theta)
    if region.kind == "ball":
        L = _circle_integral(dens_half, region.center, region.r_outer, n_seg)
        M = _ball_mass(mesh, dens_ew, region.center, region.r_outer, alpha0)
    elif region.kind == "annulus":
        L = (_circle_integral(dens_half, region.center, region.r_outer, n_seg)
             + _circle_integral(dens_half, region.center, region.r_inner, n_seg))
        M = (_ball_mass(mesh, dens_ew, region.center, region.r_outer, alpha0)
             - _ball_mass(mesh, dens_ew, region.center, region.r_inner, alpha0))
    elif region.kind == "superlevel":
        a, b = mesh.contour_segments(region.level_values, region.level)
        mids = 0.5 * (a + b)
        seg_len = np.hypot(*(b - a).T)
        L = float(np.dot(seg_len, dens_half(mids)))

        def integrand(pts, tri_idx, bary):
            w = np.einsum("qk,qk->q", bary, solution.values[mesh.tri[tri_idx]])
            return V(pts) * np.exp(w)

        rule = mesh.rule(alpha=alpha0)
        M = mesh.superlevel_integral(rule, integrand, region.level_values, region.level)
    else:
        raise ValueError(f"unknown region kind {region.kind!r}")

    lhs = 2.0 * L**2
    rhs = (8.0 * math.pi * (1.0 - alpha0) - M) * M
    slack = lhs - rhs
    equality = abs(slack) <= equality_tol * abs(rhs) if rhs != 0.0 else abs(slack) <= equality_tol
    return BolReport(L=L, M=M, lhs=lhs, rhs=rhs, slack=slack,
                     equality_case=bool(equality), alpha0=alpha0)


def huber_check(mesh, region: Region, alpha0: float, contains_origin: bool,
                g: GridField | None = None,
                n_boundary: int | None = None) -> HuberReport:
    """Length-area inequality for the density |x|^(-2*alpha0) e^g.

    The constant is 4*pi*(1-alpha0) when the conic point is inside (in the
    filled-hull sense supplied by the caller) and 4*pi otherwise.  The
    subharmonicity of g is checked discretely and reported, not enforced.
    """
    _check_coverage(mesh, region)
    ox, oy = mesh.origin
    g_vals = np.zeros(mesh.n_nodes) if g is None else g.values

    subharmonic_ok = True
    if g is not None:
        K = mesh.stiffness()
        interior = ~mesh.boundary
        lap = -(K @ g_vals)
        tol = 1e-8 * max(1.0, float(np.max(np.abs(g_vals))))
        subharmonic_ok = bool(np.all(lap[interior] >= -tol))

    def tilde_v(pts):
        r = np.hypot(pts[..., 0] - ox, pts[..., 1] - oy)
        return r ** (-2.0 * alpha0) * np.exp(mesh.interpolate(g_vals, pts))

    def tilde_v_half(pts):
        r = np.hypot(pts[..., 0] - ox, pts[..., 1] - oy)
        return r ** (-alpha0) * np.exp(0.5 * mesh.interpolate(g_vals, pts))

    n_seg = n_boundary if n_boundary is not None else max(256, 4 * mesh.n_theta)
    if region.kind == "ball":
        L = _circle_integral(tilde_v_half, region.center, region.r_outer, n_seg)
        M = _ball_mass(mesh, tilde_v, region.center, region.r_outer, alpha0)
    elif region.kind == "annulus":
        L = (_circle_integral(tilde_v_half, region.center, region.r_outer, n_seg)
             + _circle_integral(tilde_v_half, region.center, region.r_inner, n_seg))
        M = (_ball_mass(mesh, tilde_v, region.center, region.r_outer, alpha0)
             - _ball_mass(mesh, tilde_v, region.center, region.r_inner, alpha0))
    elif region.kind == "superlevel":
        a, b = mesh.contour_segments(region.level_values, region.level)
        mids = 0.5 * (a + b)
        L = float(np.dot(np.hypot(*(b - a).T), tilde_v_half(mids)))

        def integrand(pts, tri_idx, bary):
            return tilde_v(pts)

        rule = mesh.rule(alpha=alpha0)
        M = mesh.superlevel_integral(rule, integrand, region.level_values, region.level)
    else:
        raise ValueError(f"unknown region kind {region.kind!r}")

    const = 4.0 * math.pi * (1.0 - alpha0) if contains_origin else 4.0 * math.pi
    lhs = L**2
    rhs = const * M
    return HuberReport(L=L, M=M, constant=const, lhs=lhs, rhs=rhs,
                       slack=lhs - rhs, subharmonic_ok=subharmonic_ok)


def levelset_chain(solution_w: GridField, eta_values, levels, alpha0: float,
                   field: WeightField | None = None, density=None):
    """Per-level Huber chain: boundary integral of (V e^q)^(1/2) vs mass.

    ``solution_w`` carries w = q + eta (q the harmonic lift); the lifted
    density V e^q at a point is V e^w / e^eta.  For each level t the function
    returns (t, L_q, mu) with L_q the level-curve integral of (V e^q)^(1/2)
    and mu the clipped super-level mass of V e^q; the chain inequality is
    L_q^2 >= 4*pi*(1-alpha0)*mu.
    """
    mesh = solution_w.mesh
    V = _v_callable(field, density)
    eta_values = np.asarray(eta_values, dtype=float)
    q_vals = solution_w.values - eta_values
    rule = mesh.rule(alpha=alpha0)
    rows = []
    for t in levels:
        a, b = mesh.contour_segments(eta_values, t)
        if len(a) == 0:
            continue
        mids = 0.5 * (a + b)
        seg_len = np.hypot(*(b - a).T)
        qv = mesh.interpolate(q_vals, mids)
        L_q = float(np.dot(seg_len, np.sqrt(V(mids)) * np.exp(0.5 * qv)))

        def integrand(pts, tri_idx, bary):
            q = np.einsum("qk,qk->q", bary, q_vals[mesh.tri[tri_idx]])
            return V(pts) * np.exp(q)

        mu = mesh.superlevel_integral(rule, integrand, eta_values, t)
        rows.append((float(t), L_q, mu))
    return rows

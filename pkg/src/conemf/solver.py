"""Nonlinear solves on the disk and assembly of the linearized operator pair.

Two problems are covered: the normalized mean-field equation

    Delta u + lambda * H e^u / integral(H e^u) = 0,   u = 0 on the rim,

and the unnormalized form ``Delta w + V e^w = 0`` with arbitrary Dirichlet
data.  Both use damped Newton iterations (halving line search on the residual
norm) starting from u = 0, with consistent P1 quadrature from the mesh rule.
A bordered variant solves truncated far-field problems where the additive
constant of the boundary trace is an extra unknown pinned by the total-flux
compatibility row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from conemf.errors import LambdaOutOfRange, NewtonDivergence, NotConverged
from conemf.mesh import QuadRule, RingMesh
from conemf.weights import WeightField


@dataclass
class GridField:
    """Nodal scalar values on a RingMesh."""

    mesh: RingMesh
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.mesh.n_nodes,):
            raise ValueError("values must have one entry per mesh node")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite at every node")

    def interpolate(self, points):
        return self.mesh.interpolate(self.values, points)


@dataclass
class SolveReport:
    """Converged solution plus iteration diagnostics.

    ``mass`` is the quadrature of V e^u (or H e^u) over the mesh;
    ``final_residual`` is the max-norm of the discrete PDE residual in
    pointwise units (weak residual divided by node areas).
    """

    solution: GridField
    newton_iterations: int
    final_residual: float
    mass: float
    tol: float
    lam: float | None = None
    boundary_constant: float | None = None
    flagged: bool = False
    density_at_rule: np.ndarray | None = dataclass_field(default=None, repr=False)
    rule: QuadRule | None = dataclass_field(default=None, repr=False)

    @property
    def converged(self) -> bool:
        return self.final_residual <= self.tol

    def w_values(self) -> np.ndarray:
        """Unnormalized variable w = u + log(lam) - log(mass) of a mean-field solve.

        With this shift ``Delta w + H e^w = 0`` holds, which is the form the
        isoperimetric machinery consumes.  For unnormalized solves w is the
        solution itself.
        """
        if self.lam is None:
            return self.solution.values.copy()
        if self.lam == 0.0:
            raise ValueError("w is undefined at lambda = 0")
        return self.solution.values + math.log(self.lam) - math.log(self.mass)


def field_alpha_at_center(mesh: RingMesh, field: WeightField) -> float:
    """Cusp exponent of the field at the mesh origin; checks source placement.

    Every negative source must coincide with the mesh origin (grading and the
    quadrature rule are built around it); positive sources may sit anywhere.
    """
    alpha = 0.0
    for s in field.sources:
        if s.strength < 0:
            dx = s.position[0] - mesh.origin[0]
            dy = s.position[1] - mesh.origin[1]
            if math.hypot(dx, dy) > 1e-12:
                raise ValueError(
                    "negative sources must sit at the mesh origin; "
                    f"found one at {s.position} with origin {mesh.origin}"
                )
            alpha += -s.strength
    if not alpha < 1.0:
        raise ValueError("total negative strength at the center must stay below 1")
    return alpha


def _density_values(mesh, rule, field=None, density=None):
    if (field is None) == (density is None):
        raise ValueError("pass exactly one of field / density")
    if field is not None:
        return field.evaluate(rule.points)
    return density(rule.points) if callable(density) else np.asarray(density, dtype=float)


class _NewtonWorkspace:
    """Residual plumbing shared by the Newton drivers."""

    def __init__(self, mesh, rule, v_at_rule):
        self.mesh = mesh
        self.rule = rule
        self.vq = v_at_rule
        self.K = mesh.stiffness()
        self.absK = abs(self.K)
        self.interior = ~mesh.boundary
        self.scale = mesh.node_weights

    def denominator(self, u, load):
        """Componentwise scale |K||u| + |load| of the weak residual.

        Scaling by it keeps the error measure meaningful down to rounding
        level on strongly graded meshes, where raw pointwise scaling by tiny
        center cells drowns in floating-point noise.  During a line search
        the denominator must be frozen at the current iterate; rescaling per
        trial would break the guaranteed descent of the Newton direction.
        """
        denom = self.absK @ np.abs(u) + np.abs(load)
        return denom + np.max(denom) * 1e-30 + 1e-300

    def scaled_norm(self, residual, denom):
        return float(np.max(np.abs(residual[self.interior]) / denom[self.interior]))

    def backward_error(self, u, residual, load):
        return self.scaled_norm(residual, self.denominator(u, load))

    def nonlinear_terms(self, u):
        uq = self.mesh.eval_p1(u, self.rule)
        eq = self.vq * np.exp(uq)
        load = self.mesh.weighted_load(self.rule, eq)
        mass = float(np.dot(self.rule.weights, eq))
        return eq, load, mass


def _line_search(norm0, norm_of, max_halvings=30):
    """Largest step 2^-k achieving an Armijo decrease; (None, None) if none."""
    t = 1.0
    for _ in range(max_halvings):
        nt = norm_of(t)
        if math.isfinite(nt) and nt < norm0 * (1.0 - 1e-4 * t):
            return t, nt
        t *= 0.5
    return None, None


def solve_unnormalized(mesh: RingMesh, field: WeightField | None = None,
                       boundary_values=0.0, tol: float = 1e-10,
                       density=None, alpha: float | None = None,
                       max_iter: int = 60, initial=None) -> SolveReport:
    """Solve Delta w + V e^w = 0 with Dirichlet data ``boundary_values``.

    V comes from ``field`` (a WeightField) or a raw ``density`` callable with
    cusp exponent ``alpha`` at the mesh origin.  Boundary data may be a
    scalar, an array over boundary nodes, or a callable of coordinates.
    """
    if field is not None:
        alpha = field_alpha_at_center(mesh, field)
    elif alpha is None:
        alpha = 0.0
    rule = mesh.rule(alpha=alpha)
    vq = _density_values(mesh, rule, field, density)
    ws = _NewtonWorkspace(mesh, rule, vq)
    imask = ws.interior
    bmask = mesh.boundary

    u = np.zeros(mesh.n_nodes) if initial is None else np.asarray(initial, dtype=float).copy()
    if callable(boundary_values):
        u[bmask] = boundary_values(mesh.nodes[bmask])
    else:
        u[bmask] = boundary_values

    def res_norm(uv):
        _, load, _ = ws.nonlinear_terms(uv)
        return ws.backward_error(uv, ws.K @ uv - load, load)

    norm = res_norm(u)
    iterations = 0
    while norm > tol and iterations < max_iter:
        eq, load, _ = ws.nonlinear_terms(u)
        Bw = mesh.assemble_weighted_mass(rule, eq)
        J = (ws.K - Bw)[imask][:, imask].tocsc()
        F = (ws.K @ u - load)[imask]
        step = spla.spsolve(J, -F)
        denom = ws.denominator(u, load)
        norm_frozen = ws.scaled_norm(ws.K @ u - load, denom)

        def norm_of(t):
            trial = u.copy()
            trial[imask] += t * step
            _, load_t, _ = ws.nonlinear_terms(trial)
            return ws.scaled_norm(ws.K @ trial - load_t, denom)

        t, _ = _line_search(norm_frozen, norm_of)
        if t is None:
            raise NewtonDivergence(
                f"no descent after {iterations} iterations; residual {norm:.3e}"
            )
        u[imask] += t * step
        norm = res_norm(u)
        iterations += 1
    if norm > tol:
        raise NewtonDivergence(
            f"residual {norm:.3e} above tol {tol:.1e} after {max_iter} iterations"
        )

    eq, _, mass = ws.nonlinear_terms(u)
    return SolveReport(GridField(mesh, u), iterations, norm, mass, tol,
                       density_at_rule=eq, rule=rule)


def _meanfield_newton(mesh, rule, vq, lam, boundary, tol, max_iter, initial):
    """Newton kernel for Delta u + lam*V e^u/int(V e^u) = 0 with Dirichlet data."""
    ws = _NewtonWorkspace(mesh, rule, vq)
    imask = ws.interior
    u = np.zeros(mesh.n_nodes) if initial is None else np.asarray(initial, dtype=float).copy()
    u[mesh.boundary] = boundary

    def res_norm(uv):
        _, load, mass = ws.nonlinear_terms(uv)
        r = (ws.K @ uv) - lam * load / mass
        return ws.backward_error(uv, r, lam * load / mass)

    norm = res_norm(u)
    iterations = 0
    while norm > tol and iterations < max_iter:
        eq, load, mass = ws.nonlinear_terms(u)
        Bw = mesh.assemble_weighted_mass(rule, eq)
        J0 = (ws.K - (lam / mass) * Bw)[imask][:, imask].tocsc()
        lu = spla.splu(J0)
        b_int = load[imask]
        F = (ws.K @ u)[imask] - lam * b_int / mass
        # nonlocal normalization term is the rank-one update (lam/mass^2) b b^T,
        # folded in with Sherman-Morrison to keep the factorization sparse
        c = lam / mass**2
        y = lu.solve(-F)
        jb = lu.solve(b_int)
        sm_denom = 1.0 + c * float(np.dot(b_int, jb))
        step = y - (c * float(np.dot(b_int, y)) / sm_denom) * jb
        denom = ws.denominator(u, lam * load / mass)
        norm_frozen = ws.scaled_norm((ws.K @ u) - lam * load / mass, denom)

        def norm_of(t):
            trial = u.copy()
            trial[imask] += t * step
            _, load_t, mass_t = ws.nonlinear_terms(trial)
            return ws.scaled_norm((ws.K @ trial) - lam * load_t / mass_t, denom)

        t, _ = _line_search(norm_frozen, norm_of)
        if t is None:
            raise NewtonDivergence(
                f"no descent after {iterations} iterations; residual {norm:.3e}"
            )
        u[imask] += t * step
        norm = res_norm(u)
        iterations += 1
    if norm > tol:
        raise NewtonDivergence(
            f"residual {norm:.3e} above tol {tol:.1e} after {max_iter} iterations"
        )
    return u, norm, iterations, ws


def solve_mean_field(mesh: RingMesh, field: WeightField, lam: float,
                     tol: float = 1e-10, force: bool = False,
                     max_iter: int = 60, initial=None) -> SolveReport:
    """Solve Delta u + lam*H e^u / int(H e^u) = 0 with u = 0 on the rim.

    ``lam`` must stay below 8*pi*(1-alpha0); with ``force=True`` the
    threshold is only flagged, not fatal, so endpoint runs are possible.
    """
    alpha0 = field_alpha_at_center(mesh, field)
    threshold = 8.0 * math.pi * (1.0 - alpha0)
    flagged = False
    if lam < 0:
        raise LambdaOutOfRange(f"lambda must be nonnegative, got {lam}")
    if lam >= threshold:
        if not force:
            raise LambdaOutOfRange(
                f"lambda = {lam} at or above the threshold {threshold:.6f}; "
                "pass force=True to attempt anyway"
            )
        flagged = True

    rule = mesh.rule(alpha=alpha0)
    vq = field.evaluate(rule.points)

    if lam == 0.0:
        ws = _NewtonWorkspace(mesh, rule, vq)
        eq, _, mass = ws.nonlinear_terms(np.zeros(mesh.n_nodes))
        return SolveReport(GridField(mesh, np.zeros(mesh.n_nodes)), 0, 0.0,
                           mass, tol, lam=0.0, density_at_rule=eq * 0.0, rule=rule)

    u, norm, iterations, ws = _meanfield_newton(mesh, rule, vq, lam, 0.0,
                                                tol, max_iter, initial)
    eq, _, mass = ws.nonlinear_terms(u)
    return SolveReport(GridField(mesh, u), iterations, norm, mass, tol,
                       lam=lam, flagged=flagged,
                       density_at_rule=eq * (lam / mass), rule=rule)


def representation_constancy(mesh, rule, density_at_rule, values, n_probe: int = 24):
    """Spread of u + (1/2 pi) integral log|y-z| rho(z) dz over probe points.

    A solution of the global problem satisfies u = -(1/2 pi) int log|y-z|
    rho dz + C exactly, so the combination above is constant; truncation
    artifacts (rim-dominated branches) show an O(1) spread.  Returns
    (max - min) over probe points at moderate radii.
    """
    rho_w = rule.weights * density_at_rule
    r_hi = mesh.radius
    radii = np.geomspace(2.0, max(4.0, 0.25 * r_hi), max(4, n_probe // 4))
    angles = np.linspace(0.0, 2.0 * math.pi, 4, endpoint=False)
    pts = np.stack([
        (mesh.origin[0] + radii[:, None] * np.cos(angles)).ravel(),
        (mesh.origin[1] + radii[:, None] * np.sin(angles)).ravel()], axis=1)
    u_p = mesh.interpolate(values, pts)
    h = np.empty(pts.shape[0])
    for k, y in enumerate(pts):
        logd = 0.5 * np.log((rule.points[:, 0] - y[0]) ** 2
                            + (rule.points[:, 1] - y[1]) ** 2)
        h[k] = u_p[k] + float(np.dot(rho_w, logd)) / (2.0 * math.pi)
    return float(h.max() - h.min()), float(np.mean(h))


def solve_far_field(mesh: RingMesh, field: WeightField | None = None,
                    slope: float = -4.0, density=None, alpha: float | None = None,
                    trace=None, tol: float = 1e-10, max_iter: int = 80,
                    initial=None, bubble_widths=(1.0, 0.5, 2.0, 0.25, 4.0),
                    representation_tol: float = 0.05) -> SolveReport:
    """Truncated-plane solve with boundary trace ``slope*log|x| + c``, c unknown.

    Integrating the equation forces the total weighted mass to equal
    ``-2*pi*slope`` (the discrete scheme is conservative: quadrature mass and
    rim flux agree identically at convergence), so the solve runs the
    normalized form  Delta v + m * V e^v / int(V e^v) = 0  with the known
    logarithmic trace at the target mass; the additive constant
    c = log(m) - log(int(V e^v)) falls out of the normalization.

    The truncated problem also carries rim-dominated artifact branches with
    the same mass, so candidate starts (log bubbles of several widths, plus
    ``initial`` if given) are solved and the first whose logarithmic-potential
    representation is constant within ``representation_tol`` is accepted.
    """
    if field is not None:
        alpha = field_alpha_at_center(mesh, field)
    elif alpha is None:
        alpha = 0.0
    if slope >= 0.0:
        raise ValueError("far-field slope must be negative (finite mass)")
    target = -2.0 * math.pi * slope

    if trace is None:
        def trace(points):
            return slope * np.log(np.hypot(points[..., 0], points[..., 1]))

    rule = mesh.rule(alpha=alpha)
    vq = _density_values(mesh, rule, field, density)
    g_b = trace(mesh.nodes[mesh.boundary])
    rr = np.hypot(mesh.nodes[:, 0], mesh.nodes[:, 1])

    starts = []
    if initial is not None:
        starts.append(np.asarray(initial, dtype=float).copy())
    for kappa in bubble_widths:
        starts.append(slope * 0.5 * np.log(kappa**2 + rr**2))

    best = None
    failures = []
    for v0 in starts:
        try:
            v, norm, iters, ws = _meanfield_newton(mesh, rule, vq, target, g_b,
                                                   tol, max_iter, v0)
        except NewtonDivergence as exc:
            failures.append(str(exc))
            continue
        eq, _, mass_v = ws.nonlinear_terms(v)
        c = math.log(target) - math.log(mass_v)
        u = v + c
        dens_u = eq * (target / mass_v)
        spread, _ = representation_constancy(mesh, rule, dens_u, u)
        if best is None or spread < best[0]:
            best = (spread, u, norm, iters, c, dens_u)
        if spread <= representation_tol:
            break
    if best is None:
        raise NewtonDivergence(
            "far-field solve failed from every candidate start: " + "; ".join(failures)
        )
    spread, u, norm, iters, c, dens_u = best
    if spread > representation_tol:
        raise NewtonDivergence(
            f"no candidate satisfied the representation test (best spread "
            f"{spread:.3e}); enlarge the truncation radius"
        )
    return SolveReport(GridField(mesh, u), iters, norm, target, tol,
                       boundary_constant=c, density_at_rule=dens_u, rule=rule)


def linearized_pair(mesh: RingMesh, alpha: float, density):
    """Operator pair (A, B): A = stiffness - B, B the density-weighted mass form.

    ``density`` is V e^w at rule points or a callable; both matrices carry
    Dirichlet elimination (interior nodes only).  B is symmetric positive
    semidefinite by positive-weight quadrature.
    """
    rule = mesh.rule(alpha=alpha)
    B = mesh.assemble_weighted_mass(rule, density)
    K = mesh.stiffness()
    ii = ~mesh.boundary
    A = (K - B)[ii][:, ii].tocsr()
    return A, B[ii][:, ii].tocsr(), rule


def assemble_linearized(report: SolveReport, field: WeightField | None = None):
    """Linearized pair at a converged solve: A = -Laplace - V e^w, B = V e^w mass.

    For mean-field solves the density is the normalized one
    ``lam * H e^u / mass = H e^w``.  Raises NotConverged when the solve
    missed its tolerance.
    """
    if not report.converged:
        raise NotConverged(
            f"residual {report.final_residual:.3e} above tolerance {report.tol:.1e}"
        )
    mesh = report.solution.mesh
    A, B, _ = linearized_pair(mesh, report.rule.alpha, report.density_at_rule)
    return A, B


def operator_coo_table(matrix) -> str:
    """Coordinate-triplet text export (row column value per line)."""
    coo = sp.coo_matrix(matrix)
    lines = ["# row col value"]
    for r, c, v in zip(coo.row, coo.col, coo.data):
        lines.append("%d %d %r" % (int(r), int(c), float(v)))
    return "\n".join(lines) + "\n"

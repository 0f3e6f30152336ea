"""Inversion x -> x/|x|^2 of global solutions and the total-mass identities.

For a solution of ``Delta u1 + V1 e^(u1) = 0`` on the plane with
``V1 = |x|^(2*alpha1) * H1`` regular at 0, the transformed field

    u2(y) = u1(y/|y|^2) - (4 - 2*alpha1) * log|y|

solves the same equation with density ``V2(y) = V1(y/|y|^2)`` and trades the
cone of index alpha1 at the origin for the far field: the image decays like
``(-4 + 2*alpha1) * log|y|``.  Total weighted mass is invariant, and equals
``2*pi*(4 - 2*sum(alpha) + 2*sum(beta))`` by integrating the equation
against the far-field flux, which pins the additive constant of truncated
solves.

Two-negative-cone problems are solved on the inverted side, where only one
negative cone remains at a finite point: the mesh is centered there and the
bordered far-field solver of the solver module does the rest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from conemf.errors import OriginInMesh
from conemf.mesh import RingMesh, far_graded_mesh
from conemf.solver import GridField, SolveReport, solve_far_field
from conemf.weights import SingularSource, WeightField


def far_field_slope(sources) -> float:
    """Logarithmic slope of the desingularized solution at infinity.

    For ``Delta u1 + H e^(u1) = 0`` with H carrying strengths s_i (negative
    cones s = -alpha, positive s = beta) and the underlying geometric
    solution decaying like -4 log|x|, the slope is
    ``-4 + 2*sum(alpha_i) - 2*sum(beta_i)``.
    """
    return -4.0 + 2.0 * sum(-s.strength for s in sources)


def predicted_total_mass(sources) -> float:
    """Exact total weighted mass 2*pi*(4 - 2*sum(alpha) + 2*sum(beta))."""
    return -2.0 * math.pi * far_field_slope(sources)


@dataclass(frozen=True)
class GlobalSolutionSpec:
    """Configuration of a global problem: sources, far field, truncation."""

    sources: tuple[SingularSource, ...]
    truncation_radius: float
    far_field_slope: float = None

    def __post_init__(self):
        object.__setattr__(self, "sources", tuple(self.sources))
        slope = far_field_slope(self.sources)
        if self.far_field_slope is None:
            object.__setattr__(self, "far_field_slope", slope)
        elif abs(self.far_field_slope - slope) > 1e-10:
            raise ValueError(
                f"declared slope {self.far_field_slope} inconsistent with sources "
                f"(flux forces {slope})"
            )


@dataclass(frozen=True)
class MassIdentityReport:
    computed_mass: float
    predicted_mass: float
    residual: float            # computed/(2 pi) - predicted/(2 pi)
    relative_residual: float
    bound_4_1_minus_alpha2: float | None   # 4(1-max alpha) bound when it applies
    bound_satisfied: bool | None


def total_mass_identity(spec: GlobalSolutionSpec, computed_mass: float) -> MassIdentityReport:
    """Residual of the flux identity mass/(2 pi) = 4 - 2*sum(alpha) + 2*sum(beta).

    When the configuration has two negative cones and the dominance
    inequality holds, the identity also implies mass/(2 pi) <= 4*(1 - max
    alpha); the report carries that bound check.
    """
    predicted = predicted_total_mass(spec.sources)
    residual = (computed_mass - predicted) / (2.0 * math.pi)
    negs = sorted(-s.strength for s in spec.sources if s.strength < 0)
    bound = None
    ok = None
    if len(negs) == 2:
        betas = sum(s.strength for s in spec.sources if s.strength > 0)
        if -negs[1] + negs[0] + betas <= 0.0:
            bound = 4.0 * (1.0 - negs[1])
            ok = bool(computed_mass / (2.0 * math.pi) <= bound + 1e-9)
    return MassIdentityReport(
        computed_mass=float(computed_mass), predicted_mass=predicted,
        residual=float(residual),
        relative_residual=float((computed_mass - predicted) / predicted),
        bound_4_1_minus_alpha2=bound, bound_satisfied=ok,
    )


def kelvin_transform(field: GridField, alpha1: float, mode: str = "solution") -> GridField:
    """Transform a field on an origin-centered annulus to the inverted annulus.

    mode 'solution' applies the logarithmic correction
    ``u2(y) = u(y/|y|^2) - (4 - 2*alpha1)*log|y|``; mode 'test' transports
    plainly, ``phi1(y) = phi(y/|y|^2)``.  Node sets map exactly: ring rho
    goes to ring 1/rho with angles preserved, so the double transform is an
    involution to rounding.
    """
    mesh = field.mesh
    if mesh.has_center or mesh.origin != (0.0, 0.0):
        raise OriginInMesh("inversion needs an origin-centered annulus mesh")
    if mode not in ("solution", "test"):
        raise ValueError("mode must be 'solution' or 'test'")
    radii_img = (1.0 / mesh.radii)[::-1]
    img = RingMesh(radii_img, mesh.n_theta, has_center=False,
                   inner_boundary=mesh.inner_boundary, grading="inverted")
    vals = np.empty(img.n_nodes)
    nt = mesh.n_theta
    src = field.values.reshape(mesh.n_rings, nt)
    dst = src[::-1].copy()   # ring rho_i -> ring 1/rho_i, same angle
    if mode == "solution":
        corr = (4.0 - 2.0 * alpha1) * np.log(mesh.radii)[::-1]
        dst = dst + corr[:, None]
    vals = dst.reshape(-1)
    return GridField(img, vals)


def image_sources(sources) -> tuple[tuple[SingularSource, ...], float]:
    """Sources of the inverted problem and the cusp strength landing at 0.

    The source at the origin (index alpha1) moves to infinity; every other
    source at p keeps its strength at p/|p|^2; the image density gains
    |y|^(2*s0) at the origin with s0 = -sum of the other strengths.
    """
    origin_sources = [s for s in sources if math.hypot(*s.position) < 1e-14]
    if len(origin_sources) != 1 or origin_sources[0].strength >= 0:
        raise ValueError("need exactly one negative source at the origin to invert about")
    others = [s for s in sources if s is not origin_sources[0]]
    imaged = []
    for s in others:
        px, py = s.position
        n2 = px * px + py * py
        if n2 == 0.0:
            raise ValueError("two sources at the origin")
        imaged.append(SingularSource((px / n2, py / n2), s.strength))
    s0 = -sum(s.strength for s in others)
    return tuple(imaged), s0


def inverted_density(sources, desingularized: bool = True):
    """Density of the inverted problem in a form stable at y = 0.

    With V1 = prod over non-origin sources of |x - p_i|^(2 s_i) and the
    identity |y/|y|^2 - p|^2 = |p|^2 |y - p/|p|^2|^2 / |y|^2, the raw image
    density V2(y) = V1(y/|y|^2) carries a power |y|^(2 s0) at the origin,
    s0 = -sum of the transported strengths.  The desingularized form drops
    that power (it moves into the solution variable), leaving explicit
    powers of |y - q_i| only, regular at 0.
    """
    origin_sources = [s for s in sources if math.hypot(*s.position) < 1e-14]
    others = [s for s in sources if s not in origin_sources]

    def v2(points):
        pts = np.asarray(points, dtype=float)
        log_val = np.zeros(pts.shape[:-1])
        s_total = 0.0
        for s in others:
            px, py = s.position
            n2 = px * px + py * py
            qx, qy = px / n2, py / n2
            d2 = (pts[..., 0] - qx) ** 2 + (pts[..., 1] - qy) ** 2
            log_val = log_val + s.strength * (math.log(n2) + np.log(d2))
            s_total += s.strength
        if not desingularized:
            y2 = pts[..., 0] ** 2 + pts[..., 1] ** 2
            with np.errstate(divide="ignore", invalid="ignore"):
                log_val = log_val - s_total * np.log(y2)
        return np.exp(log_val)

    return v2


@dataclass
class InvertedSolve:
    """Solution of a global problem carried out on the inverted side.

    The solved variable is the desingularized image
    ``w2 = u2 + 2*s0*log|y|`` with the regular density
    ``W2 = V2 * |y|^(-2*s0)``; the raw image u2 (slope -4 + 2*alpha1 at
    infinity) is w2 minus that log term.
    """

    spec: GlobalSolutionSpec
    alpha1: float
    s0: float                        # origin strength absorbed into the variable
    image_cone: SingularSource | None  # the remaining negative cone, if any
    image_slope: float               # u2 slope at infinity: -4 + 2*alpha1
    solve_slope: float               # w2 slope: -4 + 2*alpha1 + 2*s0
    report: SolveReport
    density: object                  # desingularized W2 callable

    @property
    def mesh(self) -> RingMesh:
        return self.report.solution.mesh

    def u2_values(self) -> np.ndarray:
        """Raw image field u2 at the mesh nodes (log-corrected at the origin)."""
        r = np.hypot(self.mesh.nodes[:, 0], self.mesh.nodes[:, 1])
        return self.report.solution.values - 2.0 * self.s0 * np.log(np.maximum(r, 1e-300))

    def u1_at(self, x_points):
        """Original-side field u1(x) = u2(x/|x|^2) - (4-2*alpha1)*log|x|."""
        pts = np.asarray(x_points, dtype=float)
        n2 = pts[..., 0] ** 2 + pts[..., 1] ** 2
        inv = pts / n2[..., None]
        w2 = self.mesh.interpolate(self.report.solution.values, inv)
        return w2 + (2.0 * self.s0 + 4.0 - 2.0 * self.alpha1) * 0.5 * np.log(n2)


def solve_inverted(spec: GlobalSolutionSpec, n_r: int = 160, n_theta: int = 96,
                   inner_scale: float = 1e-3, tol: float = 1e-11,
                   max_iter: int = 120) -> InvertedSolve:
    """Solve the global problem by inverting about its origin cone.

    The image problem keeps a single negative cone at q2 = p2/|p2|^2; the
    mesh is centered there, graded for its cusp, and truncated at the spec's
    radius.  The far-field trace slope of the image is -4 + 2*alpha1 in the
    global coordinate |y|, imposed through the bordered flux solve.
    """
    negs = [s for s in spec.sources if s.strength < 0]
    if len(negs) not in (1, 2):
        raise ValueError("global solves cover one or two negative cones")
    alpha1 = -[s for s in negs if math.hypot(*s.position) < 1e-14][0].strength
    imaged, s0 = image_sources(spec.sources)
    neg_imaged = [s for s in imaged if s.strength < 0]
    if len(neg_imaged) > 1:
        raise ValueError("inversion would leave more than one negative cone")
    cone = neg_imaged[0] if neg_imaged else None
    alpha2 = -cone.strength if cone is not None else 0.0
    center = cone.position if cone is not None else (0.0, 0.0)

    mesh = far_graded_mesh(inner_scale, spec.truncation_radius, n_r, n_theta,
                           alpha=alpha2, origin=center)
    w2_density = inverted_density(spec.sources, desingularized=True)
    slope_solve = -4.0 + 2.0 * alpha1 + 2.0 * s0

    def trace(points):
        return slope_solve * np.log(np.hypot(points[..., 0], points[..., 1]))

    report = solve_far_field(mesh, density=w2_density, slope=slope_solve,
                             alpha=alpha2, trace=trace, tol=tol, max_iter=max_iter)
    return InvertedSolve(spec=spec, alpha1=alpha1, s0=s0, image_cone=cone,
                         image_slope=-4.0 + 2.0 * alpha1, solve_slope=slope_solve,
                         report=report, density=w2_density)


def _smoothstep(s):
    s = np.clip(s, 0.0, 1.0)
    return s**3 * (10.0 - 15.0 * s + 6.0 * s**2)


def original_side_mass(inv: InvertedSolve, n_r: int = 240, n_theta: int = 256,
                       inner_factor: float = 1.5) -> float:
    """Quadrature of H1 e^(u1) on the original side, independent of the solve.

    Integrates over the annulus inner_factor/R <= |x| <= R/inner_factor in
    x-coordinates (whose image stays strictly inside the solved mesh) using
    a partition of unity between origin-centered polar panels and a local
    patch around the off-center negative cone.
    """
    spec = inv.spec
    R = spec.truncation_radius
    r_lo, r_hi = inner_factor / R, R / inner_factor
    origin_sources = [s for s in spec.sources if math.hypot(*s.position) < 1e-14]
    alpha1 = -origin_sources[0].strength
    others = [s for s in spec.sources if s not in origin_sources]

    def h1(points):
        pts = np.asarray(points, dtype=float)
        log_val = -2.0 * alpha1 * 0.5 * np.log(pts[..., 0] ** 2 + pts[..., 1] ** 2)
        for s in others:
            d2 = (pts[..., 0] - s.position[0]) ** 2 + (pts[..., 1] - s.position[1]) ** 2
            log_val = log_val + s.strength * np.log(d2)
        return np.exp(log_val)

    def integrand(points):
        return h1(points) * np.exp(inv.u1_at(points))

    neg_others = [s for s in others if s.strength < 0]
    patches = []
    for s in neg_others:
        dist = math.hypot(*s.position)
        rho = 0.35 * min(dist, 1.0)
        patches.append((s.position, rho, -s.strength))

    def cutoff(points):
        chi = np.zeros(np.asarray(points).shape[:-1])
        for (c, rho, _a) in patches:
            d = np.hypot(points[..., 0] - c[0], points[..., 1] - c[1])
            chi = np.maximum(chi, 1.0 - _smoothstep((d / rho - 0.5) * 2.0))
        return chi

    from scipy.special import roots_jacobi, roots_legendre

    total = 0.0
    # origin-centered log-radial panels for the bulk (integrand * (1 - chi))
    edges = np.geomspace(r_lo, r_hi, n_r + 1)
    xg, wg = roots_legendre(6)
    phi = 2.0 * math.pi * (np.arange(n_theta) + 0.5) / n_theta
    w_phi = 2.0 * math.pi / n_theta
    cs, sn = np.cos(phi), np.sin(phi)
    for a, b in zip(edges[:-1], edges[1:]):
        r = 0.5 * (a + b) + 0.5 * (b - a) * xg
        wr = 0.5 * (b - a) * wg * r
        pts = np.stack([(r[:, None] * cs).ravel(), (r[:, None] * sn).ravel()], axis=1)
        vals = integrand(pts) * (1.0 - cutoff(pts))
        total += w_phi * float(np.sum(wr[:, None] * vals.reshape(r.size, n_theta)))
    # local patches around off-center negative cones (integrand * chi)
    for (c, rho, a2) in patches:
        xj, wj = roots_jacobi(24, 0.0, 1.0 - 2.0 * a2)
        s = 0.5 * (xj + 1.0)
        wj = wj * 2.0 ** (-(2.0 - 2.0 * a2)) * rho ** 2 * s ** (2.0 * a2)
        phi_p = 2.0 * math.pi * (np.arange(n_theta) + 0.5) / n_theta
        w_phi_p = 2.0 * math.pi / n_theta
        r = rho * s
        pts = np.stack([
            (c[0] + r[:, None] * np.cos(phi_p)).ravel(),
            (c[1] + r[:, None] * np.sin(phi_p)).ravel()], axis=1)
        vals = integrand(pts) * cutoff(pts)
        total += w_phi_p * float(np.sum(wj[:, None] * vals.reshape(r.size, n_theta)))
    return total

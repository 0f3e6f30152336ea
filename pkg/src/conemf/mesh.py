"""Polar-graded triangulations of disks and annuli on which everything runs.

The mesh is a structured tensor grid in polar coordinates around a designated
origin (where the negative conic point sits), triangulated for P1 finite
elements.  Radial grading clusters rings near the origin so that fields with
a power cusp r^(2-2*alpha) stay second-order accurate.

Quadrature is built per triangle in polar coordinates: triangles touching the
origin use a Gauss-Jacobi radial rule that integrates r^(-2*alpha) times
polynomials exactly, all others use tensor Gauss between the bounding edges.
Every weight is positive, so assembled weighted mass matrices are positive
semidefinite by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.special import roots_jacobi, roots_legendre

TWO_PI = 2.0 * math.pi

# Degree-4 triangle rule (6 points, barycentric), used on clipped pieces.
_DUNAVANT4_W = np.array([0.223381589678011] * 3 + [0.109951743655322] * 3)
_DUNAVANT4_B = np.array(
    [
        [0.108103018168070, 0.445948490915965, 0.445948490915965],
        [0.445948490915965, 0.108103018168070, 0.445948490915965],
        [0.445948490915965, 0.445948490915965, 0.108103018168070],
        [0.816847572980459, 0.091576213509771, 0.091576213509771],
        [0.091576213509771, 0.816847572980459, 0.091576213509771],
        [0.091576213509771, 0.091576213509771, 0.816847572980459],
    ]
)


@dataclass(frozen=True)
class QuadRule:
    """Positive-weight quadrature points tied to mesh triangles.

    ``points`` are global coordinates; ``tri_index`` maps each point to its
    triangle and ``bary`` holds its barycentric coordinates there, so P1
    fields evaluate consistently at rule points.
    """

    alpha: float
    points: np.ndarray      # (Q, 2)
    weights: np.ndarray     # (Q,)
    tri_index: np.ndarray   # (Q,)
    bary: np.ndarray        # (Q, 3)


def _line_polar(p, q):
    """Line through points p, q as rho(theta) = c / (nx cos + ny sin), c > 0."""
    d = q - p
    n = np.stack([-d[..., 1], d[..., 0]], axis=-1)
    n = n / np.linalg.norm(n, axis=-1, keepdims=True)
    c = n[..., 0] * p[..., 0] + n[..., 1] * p[..., 1]
    flip = c < 0
    n = np.where(flip[..., None], -n, n)
    return n, np.abs(c)


class RingMesh:
    """Structured polar mesh: optional center node plus rings of n_theta nodes.

    Parameters
    ----------
    radii : array_like
        Strictly increasing ring radii (> 0).
    n_theta : int
        Angular resolution (nodes per ring).
    has_center : bool
        Include the origin as a node (disk) or not (annulus).
    inner_boundary : bool
        Mark the first ring as Dirichlet boundary (annulus only).
    origin : pair of floats
        Physical location of the mesh origin.
    grading : object
        Descriptor of the radial grading, kept for reporting only.
    """

    def __init__(self, radii, n_theta, has_center=True, inner_boundary=False,
                 origin=(0.0, 0.0), grading=None):
        radii = np.asarray(radii, dtype=float)
        if radii.ndim != 1 or radii.size < 2 or np.any(np.diff(radii) <= 0) or radii[0] <= 0:
            raise ValueError("radii must be a strictly increasing positive 1-d array")
        if has_center and inner_boundary:
            raise ValueError("a mesh with a center node has no inner boundary")
        self.radii = radii
        self.n_theta = int(n_theta)
        self.has_center = bool(has_center)
        self.inner_boundary = bool(inner_boundary)
        self.origin = (float(origin[0]), float(origin[1]))
        self.grading = grading
        self.n_rings = radii.size
        self.theta = TWO_PI * np.arange(self.n_theta) / self.n_theta
        self._build_nodes()
        self._build_triangles()
        self._build_node_weights()
        self._stiffness = None
        self._adjacency = None
        self._rules = {}

    @property
    def radius(self) -> float:
        return float(self.radii[-1])

    # -- construction -------------------------------------------------------

    def _build_nodes(self):
        nt, nr = self.n_theta, self.n_rings
        offset = 1 if self.has_center else 0
        n_nodes = offset + nr * nt
        xy = np.empty((n_nodes, 2))
        if self.has_center:
            xy[0] = (0.0, 0.0)
        cs, sn = np.cos(self.theta), np.sin(self.theta)
        for i, r in enumerate(self.radii):
            sl = slice(offset + i * nt, offset + (i + 1) * nt)
            xy[sl, 0] = r * cs
            xy[sl, 1] = r * sn
        self.local_nodes = xy
        self.nodes = xy + np.asarray(self.origin)
        self.n_nodes = n_nodes
        self._offset = offset
        boundary = np.zeros(n_nodes, dtype=bool)
        boundary[offset + (nr - 1) * nt:] = True
        if self.inner_boundary:
            boundary[offset: offset + nt] = True
        self.boundary = boundary

    def node_index(self, ring, j):
        """Global index of node (ring, j); ring = -1 addresses the center node."""
        if ring == -1:
            if not self.has_center:
                raise IndexError("mesh has no center node")
            return 0
        return self._offset + ring * self.n_theta + (j % self.n_theta)

    def _build_triangles(self):
        nt, nr = self.n_theta, self.n_rings
        j = np.arange(nt)
        jp = (j + 1) % nt
        theta_j = self.theta
        tris, kinds, th_lo = [], [], []
        if self.has_center:
            ring0 = self._offset + j
            ring0p = self._offset + jp
            tris.append(np.stack([np.zeros(nt, dtype=int), ring0, ring0p], axis=1))
            kinds.append(np.zeros(nt, dtype=int))
            th_lo.append(theta_j)
        for i in range(nr - 1):
            a = self._offset + i * nt + j
            b = self._offset + (i + 1) * nt + j
            c = self._offset + (i + 1) * nt + jp
            d = self._offset + i * nt + jp
            tris.append(np.stack([a, b, c], axis=1))
            kinds.append(np.full(nt, 1, dtype=int))
            th_lo.append(theta_j)
            tris.append(np.stack([a, c, d], axis=1))
            kinds.append(np.full(nt, 2, dtype=int))
            th_lo.append(theta_j)
        self.tri = np.concatenate(tris, axis=0)
        self.tri_kind = np.concatenate(kinds, axis=0)
        self.tri_theta_lo = np.concatenate(th_lo, axis=0)
        self.n_tri = self.tri.shape[0]

    def _build_node_weights(self):
        """Exact areas of the polar cells owned by each node (they tile the disk)."""
        nr, nt = self.n_rings, self.n_theta
        r = self.radii
        mid = 0.5 * (r[:-1] + r[1:])
        first_edge = 0.5 * r[0] if self.has_center else r[0]
        inner_edges = np.concatenate([[first_edge], mid])
        outer_edges = np.concatenate([mid, [r[-1]]])
        ring_area = math.pi * (outer_edges**2 - inner_edges**2) / nt
        w = np.empty(self.n_nodes)
        if self.has_center:
            w[0] = math.pi * (0.5 * r[0]) ** 2
        for i in range(nr):
            w[self._offset + i * nt: self._offset + (i + 1) * nt] = ring_area[i]
        self.node_weights = w

    # -- operators ------------------------------------------------------------

    def stiffness(self) -> sp.csr_matrix:
        """P1 stiffness matrix (full; boundary elimination is the caller's)."""
        if self._stiffness is None:
            p = self.nodes[self.tri]
            e = np.empty_like(p)
            e[:, 0] = p[:, 2] - p[:, 1]
            e[:, 1] = p[:, 0] - p[:, 2]
            e[:, 2] = p[:, 1] - p[:, 0]
            area2 = e[:, 2, 0] * (-e[:, 1, 1]) - e[:, 2, 1] * (-e[:, 1, 0])
            local = np.einsum("tad,tbd->tab", e, e) / (2.0 * area2)[:, None, None]
            rows = np.repeat(self.tri, 3, axis=1).ravel()
            cols = np.tile(self.tri, (1, 3)).ravel()
            K = sp.coo_matrix((local.ravel(), (rows, cols)),
                              shape=(self.n_nodes, self.n_nodes))
            self._stiffness = K.tocsr()
            self.tri_area = 0.5 * np.abs(area2)
        return self._stiffness

    def adjacency(self) -> sp.csr_matrix:
        if self._adjacency is None:
            i = np.concatenate([self.tri[:, 0], self.tri[:, 1], self.tri[:, 2]])
            j = np.concatenate([self.tri[:, 1], self.tri[:, 2], self.tri[:, 0]])
            A = sp.coo_matrix((np.ones(i.size), (i, j)),
                              shape=(self.n_nodes, self.n_nodes))
            self._adjacency = ((A + A.T) > 0).tocsr()
        return self._adjacency

    def subset_connected(self, mask) -> bool:
        sub = self.adjacency()[mask][:, mask]
        n, _ = connected_components(sub, directed=False)
        return n <= 1

    # -- quadrature -------------------------------------------------------------

    def rule(self, alpha: float = 0.0, n_rad: int = 4, n_ang: int = 4) -> QuadRule:
        """Quadrature adapted to a center weight r^(-2*alpha), alpha in [0, 1)."""
        key = (round(float(alpha), 14), n_rad, n_ang)
        if key not in self._rules:
            self._rules[key] = self._build_rule(float(alpha), n_rad, n_ang)
        return self._rules[key]

    def _build_rule(self, alpha, n_rad, n_ang):
        xg, wg = roots_legendre(n_ang)
        tg = 0.5 * (xg + 1.0)
        wg = 0.5 * wg
        dtheta = TWO_PI / self.n_theta
        pts, wts, tidx = [], [], []

        def chord_rho(va, vb):
            def fn(sel, th):
                a = self.local_nodes[self.tri[sel, va]]
                b = self.local_nodes[self.tri[sel, vb]]
                n, c = _line_polar(a, b)
                return c[:, None] / (np.cos(th) * n[:, None, 0]
                                     + np.sin(th) * n[:, None, 1])
            return fn

        def emit(sel, th, r, w):
            th_full = np.broadcast_to(th[..., None], r.shape)
            pts.append(np.stack([(r * np.cos(th_full)).ravel(),
                                 (r * np.sin(th_full)).ravel()], axis=1))
            wts.append(w.ravel())
            tidx.append(np.repeat(sel, th.shape[1] * r.shape[-1]))

        fan = np.where(self.tri_kind == 0)[0]
        if fan.size:
            th = self.tri_theta_lo[fan][:, None] + dtheta * tg[None, :]
            w_th = dtheta * wg[None, :]
            rho = chord_rho(1, 2)(fan, th)
            xj, wj = roots_jacobi(n_rad, 0.0, 1.0 - 2.0 * alpha)
            s = 0.5 * (xj + 1.0)
            wj = wj * 2.0 ** (-(2.0 - 2.0 * alpha))
            r = rho[..., None] * s
            w = (w_th[..., None] * wj) * rho[..., None] ** 2 * s ** (2.0 * alpha)
            emit(fan, th, r, w)

        ring_of_vertex = (self.tri - self._offset) // self.n_theta
        for kind, lo_pair, hi_pair in ((1, (0, 2), (1, 2)), (2, (0, 2), (0, 1))):
            sel = np.where(self.tri_kind == kind)[0]
            if sel.size == 0:
                continue
            th = self.tri_theta_lo[sel][:, None] + dtheta * tg[None, :]
            w_th = dtheta * wg[None, :]
            rho_lo = chord_rho(*lo_pair)(sel, th)
            rho_hi = chord_rho(*hi_pair)(sel, th)
            # replace rim chords by the true circular arc so the rule covers
            # the exact disk/annulus; P1 factors extend linearly over the sliver
            if kind == 1:
                rim = ring_of_vertex[sel, 1] == self.n_rings - 1
                rho_hi[rim] = self.radii[-1]
            elif self.inner_boundary:
                rim = ring_of_vertex[sel, 0] == 0
                rho_lo[rim] = self.radii[0]
            xl, wl = roots_legendre(n_rad)
            sl = 0.5 * (xl + 1.0)
            wl = 0.5 * wl
            if alpha > 0.55:
                # substitute z = r^(2-2*alpha); absorbs the steep weight so the
                # remaining integrand is polynomial for alpha in {0.5, 0.75}
                kappa = 2.0 - 2.0 * alpha
                z_lo, z_hi = rho_lo**kappa, rho_hi**kappa
                z_span = z_hi - z_lo
                z = z_lo[..., None] + z_span[..., None] * sl
                r = z ** (1.0 / kappa)
                w = (w_th[..., None] * wl) * z_span[..., None] * r ** (2.0 - kappa) / kappa
            else:
                span = rho_hi - rho_lo
                r = rho_lo[..., None] + span[..., None] * sl
                w = (w_th[..., None] * wl) * span[..., None] * r
            emit(sel, th, r, w)

        points = np.concatenate(pts, axis=0)
        weights = np.concatenate(wts, axis=0)
        tri_index = np.concatenate(tidx, axis=0)
        bary = self.barycentric(points, tri_index)
        return QuadRule(alpha=alpha, points=points + np.asarray(self.origin),
                        weights=weights, tri_index=tri_index, bary=bary)

    def barycentric(self, local_points, tri_index):
        """Barycentric coordinates of local-frame points w.r.t. given triangles."""
        tri = self.tri[tri_index]
        p0 = self.local_nodes[tri[:, 0]]
        d1 = self.local_nodes[tri[:, 1]] - p0
        d2 = self.local_nodes[tri[:, 2]] - p0
        det = d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]
        rel = local_points - p0
        l1 = (rel[:, 0] * d2[:, 1] - rel[:, 1] * d2[:, 0]) / det
        l2 = (d1[:, 0] * rel[:, 1] - d1[:, 1] * rel[:, 0]) / det
        return np.stack([1.0 - l1 - l2, l1, l2], axis=1)

    def eval_p1(self, values, rule: QuadRule):
        """P1 field values at the rule points."""
        v = np.asarray(values, dtype=float)[self.tri[rule.tri_index]]
        return np.einsum("qk,qk->q", rule.bary, v)

    def assemble_weighted_mass(self, rule: QuadRule, density) -> sp.csr_matrix:
        """Matrix B_ab = integral of density * phi_a * phi_b under the rule.

        ``density`` is either precomputed values at rule points or a callable
        of global coordinates.
        """
        d = density(rule.points) if callable(density) else np.asarray(density, dtype=float)
        wd = rule.weights * d
        tri = self.tri[rule.tri_index]
        vals = (wd[:, None, None] * rule.bary[:, :, None] * rule.bary[:, None, :]).ravel()
        rows = np.repeat(tri, 3, axis=1).ravel()
        cols = np.tile(tri, (1, 3)).ravel()
        B = sp.coo_matrix((vals, (rows, cols)), shape=(self.n_nodes, self.n_nodes))
        return B.tocsr()

    def weighted_load(self, rule: QuadRule, density) -> np.ndarray:
        """Vector b_a = integral of density * phi_a (consistent node masses)."""
        d = density(rule.points) if callable(density) else np.asarray(density, dtype=float)
        wd = rule.weights * d
        out = np.zeros(self.n_nodes)
        np.add.at(out, self.tri[rule.tri_index].ravel(), (wd[:, None] * rule.bary).ravel())
        return out

    def integrate(self, rule: QuadRule, density) -> float:
        d = density(rule.points) if callable(density) else np.asarray(density, dtype=float)
        return float(np.dot(rule.weights, d))

    # -- interpolation -----------------------------------------------------------

    def local_polar(self, points):
        pts = np.asarray(points, dtype=float) - np.asarray(self.origin)
        r = np.hypot(pts[..., 0], pts[..., 1])
        th = np.arctan2(pts[..., 1], pts[..., 0]) % TWO_PI
        return r, th

    def _ring_values(self, values):
        return np.asarray(values, dtype=float)[self._offset:].reshape(
            self.n_rings, self.n_theta)

    def interpolate(self, values, points):
        """Bilinear-in-(r, theta) interpolation of nodal values at points."""
        values = np.asarray(values, dtype=float)
        r, th = self.local_polar(points)
        scalar = r.ndim == 0
        r, th = np.atleast_1d(r), np.atleast_1d(th)
        ringv = self._ring_values(values)
        nt = self.n_theta
        dtheta = TWO_PI / nt
        jf = th / dtheta
        j0 = np.floor(jf).astype(int) % nt
        j1 = (j0 + 1) % nt
        f = jf - np.floor(jf)
        i_hi = np.searchsorted(self.radii, r)
        out = np.empty_like(r, dtype=float)
        inner = i_hi == 0
        outer = i_hi >= self.n_rings
        midm = ~(inner | outer)
        if np.any(midm):
            ih = i_hi[midm]
            il = ih - 1
            tau = (r[midm] - self.radii[il]) / (self.radii[ih] - self.radii[il])
            v_lo = (1 - f[midm]) * ringv[il, j0[midm]] + f[midm] * ringv[il, j1[midm]]
            v_hi = (1 - f[midm]) * ringv[ih, j0[midm]] + f[midm] * ringv[ih, j1[midm]]
            out[midm] = (1 - tau) * v_lo + tau * v_hi
        if np.any(inner):
            v0 = (1 - f[inner]) * ringv[0, j0[inner]] + f[inner] * ringv[0, j1[inner]]
            if self.has_center:
                tau = r[inner] / self.radii[0]
                out[inner] = (1 - tau) * values[0] + tau * v0
            else:
                out[inner] = v0
        if np.any(outer):
            out[outer] = (1 - f[outer]) * ringv[-1, j0[outer]] + f[outer] * ringv[-1, j1[outer]]
        return float(out[0]) if scalar else out

    # -- level sets ----------------------------------------------------------------

    def contour_segments(self, values, level):
        """Marching-triangle segments of the P1 level curve {values = level}.

        Returns (a, b): arrays (S, 2) of segment endpoints in global
        coordinates.  Integrals over the curve are additive over segments, so
        no stitching is performed.
        """
        v = np.asarray(values, dtype=float)[self.tri]
        above = v > level
        s = above.sum(axis=1)
        sel = np.where((s == 1) | (s == 2))[0]
        if sel.size == 0:
            return np.zeros((0, 2)), np.zeros((0, 2))
        va = v[sel]
        odd_above = s[sel] == 1
        odd = np.where(odd_above, np.argmax(above[sel], axis=1),
                       np.argmin(above[sel], axis=1))
        p = self.nodes[self.tri[sel]]
        idx = np.arange(sel.size)
        p_odd, v_odd = p[idx, odd], va[idx, odd]
        ends = []
        for k in (1, 2):
            oth = (odd + k) % 3
            p_oth, v_oth = p[idx, oth], va[idx, oth]
            t = (level - v_odd) / (v_oth - v_odd)
            ends.append(p_odd + (p_oth - p_odd) * t[:, None])
        return ends[0], ends[1]

    def superlevel_integral(self, rule: QuadRule, integrand, values, level) -> float:
        """Integral of ``integrand`` over {P1 interpolant of values > level}.

        Triangles fully above the level contribute through the rule;
        straddling triangles are clipped against the linear level line and
        integrated with a degree-4 rule on the clipped polygon.  ``integrand``
        is a callable of (points, tri_index, bary).
        """
        v = np.asarray(values, dtype=float)[self.tri]
        above = v > level
        s = above.sum(axis=1)
        total = 0.0
        pt_full = (s == 3)[rule.tri_index]
        if np.any(pt_full):
            vals = integrand(rule.points[pt_full], rule.tri_index[pt_full],
                             rule.bary[pt_full])
            total += float(np.dot(rule.weights[pt_full], vals))
        sel = np.where((s == 1) | (s == 2))[0]
        if sel.size == 0:
            return total
        va = v[sel]
        odd_above = s[sel] == 1
        odd = np.where(odd_above, np.argmax(above[sel], axis=1),
                       np.argmin(above[sel], axis=1))
        o1, o2 = (odd + 1) % 3, (odd + 2) % 3
        p = self.nodes[self.tri[sel]]
        idx = np.arange(sel.size)
        p_odd, v_odd = p[idx, odd], va[idx, odd]
        p_1, v_1 = p[idx, o1], va[idx, o1]
        p_2, v_2 = p[idx, o2], va[idx, o2]
        c1 = p_odd + (p_1 - p_odd) * ((level - v_odd) / (v_1 - v_odd))[:, None]
        c2 = p_odd + (p_2 - p_odd) * ((level - v_odd) / (v_2 - v_odd))[:, None]
        pieces = []
        ia = np.where(odd_above)[0]
        if ia.size:
            pieces.append((p_odd[ia], c1[ia], c2[ia], sel[ia]))
        ib = np.where(~odd_above)[0]
        if ib.size:
            pieces.append((p_1[ib], p_2[ib], c2[ib], sel[ib]))
            pieces.append((p_1[ib], c2[ib], c1[ib], sel[ib]))
        shift = np.asarray(self.origin)
        for q0, q1, q2, parent in pieces:
            area = 0.5 * np.abs((q1[:, 0] - q0[:, 0]) * (q2[:, 1] - q0[:, 1])
                                - (q1[:, 1] - q0[:, 1]) * (q2[:, 0] - q0[:, 0]))
            pp = (_DUNAVANT4_B[None, :, 0, None] * q0[:, None, :]
                  + _DUNAVANT4_B[None, :, 1, None] * q1[:, None, :]
                  + _DUNAVANT4_B[None, :, 2, None] * q2[:, None, :]).reshape(-1, 2)
            w = (area[:, None] * _DUNAVANT4_W[None, :]).ravel()
            tri_idx = np.repeat(parent, _DUNAVANT4_W.size)
            bary = self.barycentric(pp - shift, tri_idx)
            total += float(np.dot(w, integrand(pp, tri_idx, bary)))
        return total

    # -- serialization -----------------------------------------------------------------

    def field_table(self, values) -> str:
        """Node table, one line per node: x, y, quadrature weight, boundary flag, value."""
        v = np.asarray(values, dtype=float)
        lines = ["# x y weight boundary value"]
        for k in range(self.n_nodes):
            lines.append("%r %r %r %d %r" % (
                float(self.nodes[k, 0]), float(self.nodes[k, 1]),
                float(self.node_weights[k]), int(self.boundary[k]), float(v[k])))
        return "\n".join(lines) + "\n"


def load_field_table(text: str):
    """Inverse of RingMesh.field_table: (nodes, weights, boundary, values)."""
    rows = [ln.split() for ln in text.splitlines()
            if ln.strip() and not ln.startswith("#")]
    data = np.array([[float(c) for c in row] for row in rows])
    return data[:, :2], data[:, 2], data[:, 3].astype(bool), data[:, 4]


def disk_mesh(n_r: int, n_theta: int, radius: float = 1.0, grading: float = 2.0,
              origin=(0.0, 0.0)) -> RingMesh:
    """Graded disk mesh: ring radii radius*(i/n_r)**grading, center node included."""
    i = np.arange(1, n_r + 1) / n_r
    return RingMesh(radius * i**grading, n_theta, has_center=True,
                    origin=origin, grading=grading)


def annulus_mesh(r_in: float, r_out: float, n_r: int, n_theta: int,
                 origin=(0.0, 0.0)) -> RingMesh:
    """Annulus with geometrically spaced rings; both rims are boundary."""
    radii = np.geomspace(r_in, r_out, n_r + 1)
    return RingMesh(radii, n_theta, has_center=False, inner_boundary=True,
                    origin=origin, grading="geometric")


def inversion_symmetric_annulus(r_out: float, n_half: int, n_theta: int) -> RingMesh:
    """Annulus [1/r_out, r_out] whose ring set is exactly invariant under r -> 1/r."""
    e = np.linspace(0.0, 1.0, n_half + 1)
    exponents = np.concatenate([-e[::-1], e[1:]])
    radii = r_out**exponents
    return RingMesh(radii, n_theta, has_center=False, inner_boundary=True,
                    grading="inversion-symmetric")


def far_graded_mesh(r_inner_scale: float, r_out: float, n_r: int, n_theta: int,
                    alpha: float, origin=(0.0, 0.0)) -> RingMesh:
    """Truncated-plane mesh: graded near the origin cusp, geometric far out.

    Rings are uniform in sigma = t/(1+t) with t = r^(2-2*alpha), the variable
    in which the reference measure is uniform, so both the cusp at the origin
    and the slow tail toward the truncation radius stay resolved.
    """
    a = 2.0 - 2.0 * alpha
    t_lo, t_hi = r_inner_scale**a, r_out**a
    sigma = np.linspace(t_lo / (1 + t_lo), t_hi / (1 + t_hi), n_r)
    t = sigma / (1.0 - sigma)
    radii = t ** (1.0 / a)
    return RingMesh(radii, n_theta, has_center=True, origin=origin,
                    grading={"kind": "sigma-uniform", "alpha": alpha})

"""Eigenvalues of the linearized operator and mass-threshold verdicts.

The pair (A, B) from the solver represents the weak form of
``-Delta - V e^w`` against the weighted mass ``V e^w``; its generalized
eigenvalues nu_hat satisfy nu_hat > -1.  The first one is positive whenever
the weighted mass stays at or below 4*pi*(1-alpha0), the second whenever it
stays at or below 8*pi*(1-alpha0); the report records both verdicts.

For global problems truncated to a large disk the admissible perturbations
tend to a constant at infinity, so the probe condenses the rim nodes into a
single unknown-constant degree of freedom; the o(log) growth class further
forces the weighted integral of the perturbation to vanish, imposed as a
B-orthogonality constraint in the iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from conemf.errors import IndefiniteB, SolverStall, TruncationTooSmall
from conemf.solver import GridField, SolveReport, assemble_linearized, linearized_pair


@dataclass(frozen=True)
class SpectrumReport:
    """Two smallest linearization eigenvalues with threshold verdicts.

    ``first_threshold_verdict`` is the implication "mass <= 4 pi (1-alpha0)
    implies nu_hat_1 > 0" evaluated on the data (vacuously true above the
    threshold); likewise for the second at 8 pi (1-alpha0).
    """

    nu_hat_1: float
    nu_hat_2: float
    mass: float
    threshold_4pi: float
    threshold_8pi: float
    first_threshold_verdict: bool
    second_threshold_verdict: bool
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray = dataclass_field(repr=False)
    b_orthonormality: float = 0.0

    @property
    def nu_hats(self):
        return self.eigenvalues


def eigen_solve(operators, k: int = 2, alpha0: float = 0.0,
                mass: float | None = None, tol: float = 0.0) -> SpectrumReport:
    """k smallest generalized eigenpairs of (A, B) by shift-invert Lanczos.

    ``operators`` is the (A, B) pair with Dirichlet elimination applied.
    B must be positive definite (raises IndefiniteB otherwise); eigenvalues
    come out B-orthonormal.
    """
    A, B = operators[0], operators[1]
    dmin = B.diagonal().min()
    if dmin <= 0.0:
        raise IndefiniteB(f"weighted mass form has nonpositive diagonal {dmin:.3e}")
    try:
        vals, vecs = spla.eigsh(A, k=k, M=B, sigma=-1.05, which="LM", tol=tol)
    except (spla.ArpackNoConvergence, spla.ArpackError) as exc:
        raise SolverStall(f"eigen iteration failed: {exc}") from exc
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    gram = vecs.T @ (B @ vecs)
    orth = float(np.max(np.abs(gram - np.eye(k))))
    thr4 = 4.0 * math.pi * (1.0 - alpha0)
    thr8 = 8.0 * math.pi * (1.0 - alpha0)
    m = math.nan if mass is None else float(mass)
    v1 = (not m <= thr4) or vals[0] > 0.0
    v2 = (not m <= thr8) or (k >= 2 and vals[1] > 0.0)
    return SpectrumReport(
        nu_hat_1=float(vals[0]), nu_hat_2=float(vals[1]) if k >= 2 else math.nan,
        mass=m, threshold_4pi=thr4, threshold_8pi=thr8,
        first_threshold_verdict=bool(v1), second_threshold_verdict=bool(v2),
        eigenvalues=vals, eigenvectors=vecs, b_orthonormality=orth,
    )


def spectrum_of_solve(report: SolveReport, k: int = 2) -> SpectrumReport:
    """Assemble the linearized pair at a converged solve and diagonalize."""
    A, B = assemble_linearized(report)
    alpha0 = report.rule.alpha
    mass = report.lam if report.lam is not None else report.mass
    return eigen_solve((A, B), k=k, alpha0=alpha0, mass=mass)


def fit_far_field(solution: GridField, fraction: float = 0.15):
    """Least-squares fit  u ~ slope*log|x| + c  on the outer radius band.

    Returns (slope, constant, max deviation of the fit on the band).
    """
    mesh = solution.mesh
    r, _ = mesh.local_polar(mesh.nodes)
    r_hi = mesh.radius
    band = r >= r_hi ** (1.0 - fraction) if r_hi > 1 else r >= (1 - fraction) * r_hi
    logr = np.log(r[band])
    vals = solution.values[band]
    A = np.stack([logr, np.ones_like(logr)], axis=1)
    coef, *_ = np.linalg.lstsq(A, vals, rcond=None)
    resid = float(np.max(np.abs(A @ coef - vals)))
    return float(coef[0]), float(coef[1]), resid


@dataclass(frozen=True)
class ProbeReport:
    """Near-kernel scan of the linearization on a truncated plane.

    The admissible class 'olog' models perturbations of o(log|x|) growth:
    constant on the rim (one extra unknown) and weighted-mean zero; class
    'bounded' drops the mean-zero constraint.  ``near_kernel`` fires when
    the smallest |eigenvalue| drops below ``kernel_tol``.
    """

    eigenvalues: np.ndarray
    near_kernel: bool
    kernel_tol: float
    admissible: str
    fitted_slope: float
    fitted_constant: float
    fit_residual: float
    eigenvectors_full: np.ndarray = dataclass_field(repr=False)


def nondegeneracy_probe(solution: GridField, alpha: float, density,
                        expected_slope: float | None = None,
                        admissible: str = "olog", k: int = 3,
                        kernel_tol: float = 1e-4,
                        fit_tol: float = 0.1) -> ProbeReport:
    """Scan the linearization around a truncated global solution for kernels.

    ``density`` is V e^u at points (callable) or at the rule points of
    ``mesh.rule(alpha)``.  The far field of the solution is fitted first;
    a fit deviating from ``expected_slope`` by more than ``fit_tol`` raises
    TruncationTooSmall.
    """
    if admissible not in ("olog", "bounded"):
        raise ValueError("admissible class must be 'olog' or 'bounded'")
    mesh = solution.mesh
    slope, const, resid = fit_far_field(solution)
    if expected_slope is not None and abs(slope - expected_slope) > fit_tol:
        raise TruncationTooSmall(
            f"far-field slope {slope:.4f} deviates from expected {expected_slope:.4f}"
        )

    rule = mesh.rule(alpha=alpha)
    B_full = mesh.assemble_weighted_mass(rule, density)
    K = mesh.stiffness()
    A_full = (K - B_full).tocsr()
    ii = np.where(~mesh.boundary)[0]
    bb = np.where(mesh.boundary)[0]
    n_red = ii.size + 1
    # restriction: interior nodes identity, all rim nodes -> one constant DOF
    rows = np.concatenate([ii, bb])
    cols = np.concatenate([np.arange(ii.size), np.full(bb.size, ii.size)])
    T = sp.coo_matrix((np.ones(rows.size), (rows, cols)),
                      shape=(mesh.n_nodes, n_red)).tocsr()
    A_red = (T.T @ A_full @ T).tocsc()
    B_red = (T.T @ B_full @ T).tocsc()

    constraints = None
    if admissible == "olog":
        c = T.T @ (B_full @ np.ones(mesh.n_nodes))
        # lobpcg deflates the B-orthogonal complement of the weighted constant
        constraints = (spla.splu(B_red) .solve(c))[:, None]

    shift = spla.splu((A_red + 1.05 * B_red).tocsc())
    precond = spla.LinearOperator((n_red, n_red), matvec=shift.solve)
    rng = np.random.default_rng(1234)
    X = rng.standard_normal((n_red, k))
    try:
        vals, vecs = spla.lobpcg(A_red, X, B=B_red, M=precond, Y=constraints,
                                 largest=False, tol=1e-9, maxiter=400)
    except Exception as exc:
        raise SolverStall(f"lobpcg failed: {exc}") from exc
    order = np.argsort(vals)
    vals, vecs = np.asarray(vals)[order], vecs[:, order]
    near = bool(np.min(np.abs(vals)) < kernel_tol)
    return ProbeReport(eigenvalues=vals, near_kernel=near, kernel_tol=kernel_tol,
                       admissible=admissible, fitted_slope=slope,
                       fitted_constant=const, fit_residual=resid,
                       eigenvectors_full=T @ vecs)

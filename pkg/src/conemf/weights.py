"""Singular conformal weights, disk Green's functions, cone bookkeeping.

A weight is ``H(x) = exp(h(x)) * prod_i |x - p_i|^(2*s_i)`` for a harmonic
``h`` and point sources with strengths ``s_i > -1``.  Negative strengths
``s = -alpha`` (``alpha`` in (0,1)) are conic points where ``H`` blows up;
positive strengths ``s = beta > 0`` are zeros of ``H``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from conemf.errors import (
    CoincidentPoints,
    EvaluationAtNegativeSource,
    NonFiniteHarmonicPart,
    SourceOnBoundary,
    UnsupportedSignPattern,
)

CLASSIFY_TOL = 1e-12  # boundary of the cone classification is pure arithmetic


@dataclass(frozen=True)
class SingularSource:
    """A conic point: position in R^2 and the exponent s of |x-p|^(2s).

    ``strength`` must be > -1 (the total angle 2*pi*(1+s) stays positive)
    and nonzero (zero strength is no source at all).
    """

    position: tuple[float, float]
    strength: float

    def __post_init__(self):
        if not self.strength > -1.0:
            raise ValueError(f"source strength must exceed -1, got {self.strength}")
        if self.strength == 0.0:
            raise ValueError("source strength must be nonzero")
        object.__setattr__(self, "position", (float(self.position[0]), float(self.position[1])))

    @property
    def total_angle(self) -> float:
        return 2.0 * np.pi * (1.0 + self.strength)


def harmonic_zero(points):
    """The trivial harmonic part h = 0."""
    pts = np.asarray(points, dtype=float)
    return np.zeros(pts.shape[:-1])


def harmonic_poly(coefficients: Sequence[complex]) -> Callable:
    """Harmonic part h(x) = Re(sum_k c_k z^k), z = x1 + i*x2.

    Real parts of complex polynomials are harmonic on all of R^2, which is
    the only kind of nontrivial h the configuration format supports.
    """

    coeffs = [complex(c) for c in coefficients]

    def h(points):
        pts = np.asarray(points, dtype=float)
        z = pts[..., 0] + 1j * pts[..., 1]
        val = np.zeros_like(z)
        for k, c in enumerate(coeffs):
            val = val + c * z**k
        return val.real

    return h


@dataclass(frozen=True)
class WeightField:
    """A finite set of singular sources plus a harmonic remainder.

    Positions must be pairwise distinct.  ``harmonic_part`` maps an
    ``(..., 2)`` array of points to values; it must stay finite on the
    domain of use.
    """

    sources: tuple[SingularSource, ...]
    harmonic_part: Callable = field(default=harmonic_zero)

    def __post_init__(self):
        srcs = tuple(self.sources)
        object.__setattr__(self, "sources", srcs)
        pos = [s.position for s in srcs]
        if len(set(pos)) != len(pos):
            raise ValueError("source positions must be pairwise distinct")

    @property
    def negative_sources(self) -> tuple[SingularSource, ...]:
        return tuple(s for s in self.sources if s.strength < 0)

    @property
    def positive_sources(self) -> tuple[SingularSource, ...]:
        return tuple(s for s in self.sources if s.strength > 0)

    def evaluate(self, points):
        """H at an (..., 2) array of points; +inf only at negative sources."""
        pts = np.asarray(points, dtype=float)
        h = self.harmonic_part(pts)
        if not np.all(np.isfinite(h)):
            raise NonFiniteHarmonicPart("harmonic part is not finite at a requested point")
        log_val = np.asarray(h, dtype=float).copy()
        hit_negative = np.zeros(pts.shape[:-1], dtype=bool)
        with np.errstate(divide="ignore"):
            for s in self.sources:
                d2 = (pts[..., 0] - s.position[0]) ** 2 + (pts[..., 1] - s.position[1]) ** 2
                logd2 = np.log(d2)  # -inf exactly at the source
                if s.strength < 0:
                    hit_negative |= np.isneginf(logd2)
                log_val = log_val + s.strength * logd2
        if np.any(hit_negative):
            raise EvaluationAtNegativeSource(
                "weight is +inf at a negative-strength source position"
            )
        return np.exp(log_val)

    def evaluate_smooth(self, points, exclude: int):
        """H with the radial factor of source ``exclude`` removed.

        Quadrature rules that integrate |x-p|^(2s) analytically need the
        remaining (locally smooth) factor on its own.
        """
        rest = WeightField(
            tuple(s for k, s in enumerate(self.sources) if k != exclude),
            self.harmonic_part,
        )
        return rest.evaluate(points)


def evaluate_weight(field: WeightField, x) -> float:
    """H(x) for a single point x; see WeightField.evaluate for arrays."""
    return float(field.evaluate(np.asarray(x, dtype=float)))


def disk_green(alpha: float, p, x):
    """Green's function of the unit disk scaled to -Delta G = 4*pi*alpha*delta_p.

    Closed reflection form ``G = -2*alpha*log(|x-p| / (|x-p*| |p|))`` with
    ``p* = p/|p|^2``; for ``p = 0`` this reduces to ``-2*alpha*log|x|``.
    Vanishes on ``|x| = 1``.

    Parameters
    ----------
    alpha : float in (0, 1)
    p : pole with |p| < 1
    x : evaluation point(s) with |x| <= 1, x != p
    """
    p = np.asarray(p, dtype=float)
    if float(np.hypot(p[0], p[1])) >= 1.0:
        raise SourceOnBoundary(f"pole must satisfy |p| < 1, got |p| = {np.hypot(p[0], p[1])}")
    pts = np.asarray(x, dtype=float)
    d2 = (pts[..., 0] - p[0]) ** 2 + (pts[..., 1] - p[1]) ** 2
    if np.any(d2 == 0.0):
        raise CoincidentPoints("Green's function evaluated at its pole")
    pnorm2 = p[0] ** 2 + p[1] ** 2
    if pnorm2 == 0.0:
        val = -alpha * np.log(pts[..., 0] ** 2 + pts[..., 1] ** 2)
    else:
        ps = p / pnorm2
        d2_ref = (pts[..., 0] - ps[0]) ** 2 + (pts[..., 1] - ps[1]) ** 2
        val = -alpha * (np.log(d2) - np.log(d2_ref * pnorm2))
    return val if val.ndim else float(val)


@dataclass(frozen=True)
class ConeClassification:
    """Generalized Euler characteristic and its verdict against min_i{2, theta_i/pi}."""

    chi: float
    verdict: str  # 'subcritical' | 'critical' | 'supercritical'


def classify_surface(sources: Sequence[SingularSource], euler: float) -> ConeClassification:
    """Classify a cone-point configuration on a surface of Euler characteristic ``euler``.

    chi(S, theta) = euler + sum_i (theta_i/(2*pi) - 1) with theta_i the total
    angle at each cone point.  The verdict compares chi against
    min_i {2, theta_i/pi}; equality within 1e-12 is reported as critical.
    """
    chi = float(euler) + sum(s.strength for s in sources)
    threshold = min([2.0] + [s.total_angle / np.pi for s in sources])
    if chi > threshold + CLASSIFY_TOL:
        verdict = "supercritical"
    elif chi < threshold - CLASSIFY_TOL:
        verdict = "subcritical"
    else:
        verdict = "critical"
    return ConeClassification(chi=chi, verdict=verdict)


def index_inequality_holds(sources: Sequence[SingularSource]) -> bool:
    """Whether the negative strengths dominate the positive ones.

    With two negative strengths alpha_1, alpha_2 and positives beta_i the
    test is ``-max(alpha) + min(alpha) + sum(beta) <= 0``; with a single
    negative alpha it is ``-alpha + sum(beta) <= 0``.  Any other sign
    pattern raises UnsupportedSignPattern.
    """
    negatives = sorted(-s.strength for s in sources if s.strength < 0)
    positives = [s.strength for s in sources if s.strength > 0]
    if len(negatives) not in (1, 2) or not positives:
        raise UnsupportedSignPattern(
            f"need exactly one or two negative strengths and at least one positive, "
            f"got {len(negatives)} negative / {len(positives)} positive"
        )
    if len(negatives) == 2:
        return -negatives[1] + negatives[0] + sum(positives) <= 0.0
    return -negatives[0] + sum(positives) <= 0.0

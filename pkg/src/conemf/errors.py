"""Exception types shared across the toolkit."""


class ConemfError(Exception):
    """Base class for all toolkit errors."""


# --- weights ---------------------------------------------------------------

class EvaluationAtNegativeSource(ConemfError):
    """Weight evaluated exactly at a source of negative strength (value +inf)."""


class NonFiniteHarmonicPart(ConemfError):
    """Harmonic part returned a non-finite value."""


class SourceOnBoundary(ConemfError):
    """Green's function pole lies on or outside the unit circle."""


class CoincidentPoints(ConemfError):
    """Green's function requested at its pole."""


class UnsupportedSignPattern(ConemfError):
    """Index inequality needs one or two negative strengths and at least one positive."""


# --- model -----------------------------------------------------------------

class GridTooCoarse(ConemfError):
    """Radial grid has too few nodes for a second-order residual."""


# --- solver ----------------------------------------------------------------

class NewtonDivergence(ConemfError):
    """Newton iteration failed to reduce the residual below tolerance."""


class LambdaOutOfRange(ConemfError):
    """Mass parameter at or above 8*pi*(1-alpha0); pass force=True to attempt."""


class NotConverged(ConemfError):
    """Operation requires a converged solve."""


# --- levelset --------------------------------------------------------------

class DisconnectedRegion(ConemfError):
    """Harmonic lift requested on a disconnected node set."""


class EmptyRegion(ConemfError):
    """Region contains no interior nodes."""


class NonMonotoneMu(ConemfError):
    """Distribution function failed to decrease; quadrature is inconsistent."""


# --- bol -------------------------------------------------------------------

class RegionNotInSolutionDomain(ConemfError):
    """Region extends beyond the mesh carrying the solution."""


# --- rearrange -------------------------------------------------------------

class SignError(ConemfError):
    """One-sided rearrangement needs a positive field on the region interior."""


class MassOverflow(ConemfError):
    """Weighted mass exceeds the total mass of the radial model measure."""


class NoSignChange(ConemfError):
    """Constrained minimizer did not change sign (grid too coarse)."""


# --- spectrum --------------------------------------------------------------

class SolverStall(ConemfError):
    """Eigenvalue iteration failed to converge."""


class IndefiniteB(ConemfError):
    """Weighted mass form is not positive definite beyond tolerance."""


class TruncationTooSmall(ConemfError):
    """Far-field fit residual exceeds tolerance; enlarge the truncation radius."""


# --- kelvin ----------------------------------------------------------------

class OriginInMesh(ConemfError):
    """Inversion requested on a mesh containing the origin."""


# --- continuation ----------------------------------------------------------

class StepUnderflow(ConemfError):
    """Continuation step shrank below 1e-8 of the target without convergence."""


# --- cli -------------------------------------------------------------------

class ConfigError(ConemfError):
    """Run configuration failed validation; message lists every violation."""

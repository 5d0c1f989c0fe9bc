"""Annulus geometry, truncation policy, and shared result types.

Everything in this module is an immutable value type and every function is
pure, so instances can be shared freely across threads.  The geometry fixes
the outer radius at 1; only the dimension ``n`` and the inner radius ``a``
vary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

ArrayLike = Union[Sequence[float], np.ndarray, "Point"]

# absolute tolerance on |x| used to classify a point as lying on a boundary sphere
BOUNDARY_TOL = 1e-12

# radii passed to the evaluators may miss [a, 1] by this much before rejection
RADIUS_SLACK = 1e-9


class AnnulusError(Exception):
    """Base class for every error raised by this package."""


class DomainValidationError(AnnulusError, ValueError):
    """Input violates a documented precondition (dimension, radius range, ...)."""


class SingularityError(AnnulusError, ValueError):
    """Evaluation requested at, or numerically too close to, a kernel singularity."""


class SeriesDivergenceError(AnnulusError, ValueError):
    """Arguments lie outside the open region where the series converges."""


class TailEnvelopeError(AnnulusError, RuntimeError):
    """The certified tail envelope failed its internal monotonicity check."""


class BracketingError(AnnulusError, RuntimeError):
    """A sign-change bracket could not be certified within budget."""


class GridEdgeError(AnnulusError, RuntimeError):
    """A grid scan found its extremum on the first or last node."""


class QuadratureDegreeError(AnnulusError, RuntimeError):
    """The truncation degree exceeds what the quadrature integrates exactly."""


def sphere_surface_area(n: int) -> float:
    """Surface measure of the unit sphere S^{n-1} in R^n.

    Evaluated as exp(log 2 + (n/2) log pi - lgamma(n/2)); the log-Gamma route
    keeps large ``n`` from overflowing the Gamma factor.
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 2:
        raise DomainValidationError(f"dimension must be an integer >= 2, got {n!r}")
    return math.exp(math.log(2.0) + 0.5 * n * math.log(math.pi) - math.lgamma(0.5 * n))


@dataclass(frozen=True)
class Point:
    """A point of R^n stored as a plain coordinate tuple."""

    coords: tuple[float, ...]

    @classmethod
    def of(cls, values: Sequence[float]) -> "Point":
        return cls(tuple(float(v) for v in values))

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def norm(self) -> float:
        return math.sqrt(sum(c * c for c in self.coords))

    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)

    def unit(self) -> np.ndarray:
        r = self.norm
        if r == 0.0:
            raise DomainValidationError("the zero vector has no direction")
        return self.array() / r


def as_coords(x: ArrayLike) -> np.ndarray:
    if isinstance(x, Point):
        return x.array()
    return np.asarray(x, dtype=float)


def unit_and_radius(v: np.ndarray) -> tuple[float, np.ndarray]:
    r = float(np.linalg.norm(v))
    if r == 0.0:
        raise DomainValidationError("the zero vector has no direction")
    return r, v / r


def require_unit(v: ArrayLike, tol: float = 1e-10) -> np.ndarray:
    arr = as_coords(v)
    r = float(np.linalg.norm(arr))
    if abs(r - 1.0) > tol:
        raise DomainValidationError(f"expected a unit vector, got |v| = {r}")
    return arr / r


@dataclass(frozen=True)
class AnnulusGeometry:
    """The annulus {x in R^n : a < |x| < 1} (outer radius normalized to 1)."""

    n: int
    a: float

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or isinstance(self.n, bool) or self.n < 2:
            raise DomainValidationError(f"dimension must be an integer >= 2, got {self.n!r}")
        if not (0.0 < self.a < 1.0):
            raise DomainValidationError(f"inner radius must satisfy 0 < a < 1, got {self.a!r}")

    @property
    def omega(self) -> float:
        """Surface area of the unit sphere in R^n."""
        return sphere_surface_area(self.n)

    def require_series_dim(self) -> None:
        if self.n < 3:
            raise DomainValidationError(
                "this operation is defined for n >= 3; the plane has dedicated 2-d routines"
            )

    def point(self, x: ArrayLike) -> np.ndarray:
        arr = as_coords(x)
        if arr.shape != (self.n,):
            raise DomainValidationError(
                f"expected a point of R^{self.n}, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise DomainValidationError("point coordinates must be finite")
        return arr

    def radius(self, x: ArrayLike) -> float:
        return float(np.linalg.norm(self.point(x)))

    def is_interior(self, x: ArrayLike) -> bool:
        r = self.radius(x)
        return self.a < r < 1.0

    def on_boundary(self, x: ArrayLike, tol: float = BOUNDARY_TOL) -> bool:
        r = self.radius(x)
        return abs(r - self.a) <= tol or abs(r - 1.0) <= tol

    def clamp_radius(self, r: float, slack: float = RADIUS_SLACK) -> float:
        """Validate r against the closed interval [a, 1] and clamp roundoff."""
        if not (self.a - slack <= r <= 1.0 + slack):
            raise DomainValidationError(
                f"radius {r} outside the annulus range [{self.a}, 1]"
            )
        return min(1.0, max(self.a, r))

    def require_interior_radius(self, r: float) -> float:
        if not (self.a < r < 1.0):
            raise DomainValidationError(
                f"radius {r} must lie strictly between a = {self.a} and 1"
            )
        return float(r)


def newtonian_potential(geom: AnnulusGeometry, x: ArrayLike, y: ArrayLike) -> float:
    """Fundamental solution 1/((n-2) omega |x-y|^(n-2)); requires n >= 3.

    Symmetric in its arguments and strictly positive; the distance enters only
    through |x-y|, so the scaling d -> value(1) * d^(2-n) is exact.
    """
    geom.require_series_dim()
    xv = geom.point(x)
    yv = geom.point(y)
    d = float(np.linalg.norm(xv - yv))
    if d == 0.0:
        raise SingularityError("the fundamental solution is singular at x == y")
    return d ** (2 - geom.n) / ((geom.n - 2) * geom.omega)


@dataclass(frozen=True)
class TruncationPolicy:
    """Controls series truncation: target tail bound plus hard term caps.

    ``tail_safety`` is the number of consecutive indices whose certified tail
    bound must fall below ``abs_tol`` before summation stops.
    """

    abs_tol: float = 1e-10
    max_terms: int = 100_000
    tail_safety: int = 2

    def __post_init__(self):
        if not (self.abs_tol >= 0.0) or not math.isfinite(self.abs_tol):
            raise DomainValidationError(f"abs_tol must be finite and >= 0, got {self.abs_tol!r}")
        if self.max_terms < 1:
            raise DomainValidationError(f"max_terms must be >= 1, got {self.max_terms!r}")
        if self.tail_safety < 1:
            raise DomainValidationError(f"tail_safety must be >= 1, got {self.tail_safety!r}")


DEFAULT_POLICY = TruncationPolicy()


@dataclass(frozen=True)
class EvalResult:
    """A numeric value plus the evidence of how it was truncated.

    ``tail_bound`` is a certified upper bound on the discarded remainder;
    ``converged`` is set only when that bound met the policy tolerance, so
    ``converged`` implies ``tail_bound <= abs_tol`` of the policy used.
    """

    value: float
    terms_used: int
    tail_bound: float
    converged: bool

    def scaled(self, factor: float) -> "EvalResult":
        return EvalResult(
            value=self.value * factor,
            terms_used=self.terms_used,
            tail_bound=self.tail_bound * abs(factor),
            converged=self.converged,
        )

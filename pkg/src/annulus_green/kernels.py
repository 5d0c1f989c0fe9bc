"""Series expansions of the Newtonian kernel and the annulus Poisson kernel.

Three expansions of |p - q|^(2-n) in zonal harmonics (source on the unit
sphere, source on the inner sphere, and the exterior form for |x| > |y|)
plus the two-sphere Poisson kernel that extends continuous boundary data
harmonically into the annulus.  All series carry certified geometric tail
bounds built from |Z_m| <= dim of the degree-m harmonic space.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import (
    AnnulusGeometry,
    ArrayLike,
    DomainValidationError,
    EvalResult,
    QuadratureDegreeError,
    SeriesDivergenceError,
    TruncationPolicy,
    require_unit,
    sphere_surface_area,
    unit_and_radius,
)
from .specfun import _clamp_argument, iter_gegenbauer
from .summation import sum_series


@dataclass(frozen=True)
class BoundaryData:
    """Boundary data on the two spheres of the annulus.

    ``outer(xi)`` is the value at the unit-sphere point xi; ``inner(xi)`` is
    the value at the inner-sphere point a*xi, indexed by the direction xi.
    Both callables must return finite values on every sampled direction and
    be safe for concurrent invocation.
    """

    outer: Callable[[np.ndarray], float]
    inner: Callable[[np.ndarray], float]


@dataclass(frozen=True, eq=False)
class SphereQuadrature:
    """Nodes and positive weights on the unit sphere summing to its area.

    ``max_exact_degree`` is the highest spherical-harmonic degree the rule
    integrates exactly (harmonics of degree 1..max_exact_degree integrate
    to zero up to roundoff).
    """

    nodes: np.ndarray
    weights: np.ndarray
    max_exact_degree: int

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 2 or weights.ndim != 1 or nodes.shape[0] != weights.shape[0]:
            raise DomainValidationError("nodes must be (N, n) and weights (N,)")
        if not np.all(np.isfinite(nodes)) or not np.all(np.isfinite(weights)):
            raise DomainValidationError("quadrature entries must be finite")
        if np.any(weights <= 0.0):
            raise DomainValidationError("quadrature weights must be positive")
        radii = np.linalg.norm(nodes, axis=1)
        if np.max(np.abs(radii - 1.0)) > 1e-12:
            raise DomainValidationError("quadrature nodes must lie on the unit sphere")
        n = nodes.shape[1]
        area = sphere_surface_area(n)
        if abs(float(weights.sum()) - area) > 1e-12 * area:
            raise DomainValidationError("quadrature weights must sum to the sphere area")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def dim(self) -> int:
        return self.nodes.shape[1]


def build_sphere_quadrature(degree: int) -> SphereQuadrature:
    """Product rule on S^2: Gauss-Legendre in the polar cosine, uniform
    trapezoid in azimuth; exact for spherical harmonics through ``degree``."""
    if degree < 0:
        raise DomainValidationError(f"degree must be >= 0, got {degree!r}")
    n_t = degree // 2 + 1
    n_phi = degree + 1
    t, wt = np.polynomial.legendre.leggauss(n_t)
    phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
    st = np.sqrt(np.maximum(0.0, 1.0 - t * t))
    cos_phi, sin_phi = np.cos(phi), np.sin(phi)
    nodes = np.empty((n_t * n_phi, 3))
    nodes[:, 0] = np.outer(st, cos_phi).ravel()
    nodes[:, 1] = np.outer(st, sin_phi).ravel()
    nodes[:, 2] = np.repeat(t, n_phi)
    weights = np.repeat(wt, n_phi) * (2.0 * np.pi / n_phi)
    return SphereQuadrature(
        nodes=nodes,
        weights=weights,
        max_exact_degree=min(2 * n_t - 1, n_phi - 1),
    )


def _distance_triples(n: int, t: float, q: float, scale: float):
    """Terms scale * (n-2)/(2m+n-2) * q^m * Z_m(t) with envelope
    scale * C(n+m-3, m) * q^m (the zonal kernel peaks on the diagonal)."""
    lam = 0.5 * (n - 2)
    binom = 1.0
    qp = scale
    m = 0
    for p in iter_gegenbauer(lam, t):
        beta = 2 * m + n - 2
        z = (beta / (n - 2)) * p
        yield ((n - 2) / beta) * qp * z, binom * abs(qp), (n + m - 2) / (m + 1) * q
        binom *= (n + m - 2) / (m + 1)
        qp *= q
        m += 1


def newtonian_series_outer(
    geom: AnnulusGeometry, xi: ArrayLike, y: ArrayLike, policy: TruncationPolicy
) -> EvalResult:
    """Zonal expansion of |xi - y|^(2-n) for a unit-sphere source, |y| < 1.

    At y = 0 only the constant term survives, so that value is returned
    exactly with a zero tail.
    """
    geom.require_series_dim()
    xiv = require_unit(xi)
    yv = geom.point(y)
    s = float(np.linalg.norm(yv))
    if s >= 1.0:
        raise SeriesDivergenceError(f"series diverges for |y| >= 1, got |y| = {s}")
    if s == 0.0:
        return EvalResult(value=1.0, terms_used=1, tail_bound=0.0, converged=True)
    t = _clamp_argument(float(xiv @ yv) / s)
    return sum_series(_distance_triples(geom.n, t, q=s, scale=1.0), policy)


def newtonian_series_inner(
    geom: AnnulusGeometry, xi: ArrayLike, y: ArrayLike, policy: TruncationPolicy
) -> EvalResult:
    """Zonal expansion of |a xi - y|^(2-n) for an inner-sphere source, |y| > a."""
    geom.require_series_dim()
    xiv = require_unit(xi)
    yv = geom.point(y)
    s = float(np.linalg.norm(yv))
    if s <= geom.a:
        raise SeriesDivergenceError(f"series diverges for |y| <= a, got |y| = {s}")
    t = _clamp_argument(float(xiv @ yv) / s)
    scale = s ** (2 - geom.n)
    return sum_series(_distance_triples(geom.n, t, q=geom.a / s, scale=scale), policy)


def newtonian_series_exterior(
    geom: AnnulusGeometry, x: ArrayLike, y: ArrayLike, policy: TruncationPolicy
) -> EvalResult:
    """Zonal expansion of |x - y|^(2-n) valid for |x| > |y| > 0."""
    geom.require_series_dim()
    xv = geom.point(x)
    yv = geom.point(y)
    r, xhat = unit_and_radius(xv)
    s, yhat = unit_and_radius(yv)
    if r <= s:
        raise SeriesDivergenceError(f"series needs |x| > |y|, got |x| = {r}, |y| = {s}")
    t = _clamp_argument(float(xhat @ yhat))
    scale = r ** (2 - geom.n)
    return sum_series(_distance_triples(geom.n, t, q=s / r, scale=scale), policy)


def poisson_coeff_b(geom: AnnulusGeometry, m: int, r: float) -> float:
    """Outer-sphere radial coefficient (1 - (a/r)^(2m+n-2)) / (1 - a^(2m+n-2))."""
    geom.require_series_dim()
    if m < 0:
        raise DomainValidationError(f"mode must be >= 0, got {m!r}")
    rr = geom.clamp_radius(r)
    beta = 2 * m + geom.n - 2
    return (1.0 - (geom.a / rr) ** beta) / (1.0 - geom.a**beta)


def poisson_coeff_c(geom: AnnulusGeometry, m: int, r: float) -> float:
    """Inner-sphere radial coefficient r^(-m) (a/r)^(m+n-2) (1-r^(2m+n-2))/(1-a^(2m+n-2))."""
    geom.require_series_dim()
    if m < 0:
        raise DomainValidationError(f"mode must be >= 0, got {m!r}")
    rr = geom.clamp_radius(r)
    beta = 2 * m + geom.n - 2
    return rr ** (-m) * (geom.a / rr) ** (m + geom.n - 2) * (1.0 - rr**beta) / (1.0 - geom.a**beta)


def harmonic_extension(
    geom: AnnulusGeometry,
    data: BoundaryData,
    x: ArrayLike,
    policy: TruncationPolicy,
    quad: SphereQuadrature | None = None,
) -> EvalResult:
    """Harmonic extension of two-sphere boundary data, evaluated at interior x.

    Sums the Poisson-kernel modes against quadrature approximations of the
    boundary integrals; the built-in quadrature (n = 3 only) is sized to the
    policy mode cap as degree 2*(max_terms - 1) + 2, which makes the zonal
    integrands it actually sums exact.  The certified tail envelope uses the
    sampled sup of |data| and so only reflects series truncation; quadrature
    exactness is the caller's contract via ``max_exact_degree``.
    """
    geom.require_series_dim()
    xv = geom.point(x)
    r = float(np.linalg.norm(xv))
    if not (geom.a < r < 1.0):
        raise DomainValidationError(f"evaluation point must be interior, got |x| = {r}")

    if quad is None:
        if geom.n != 3:
            raise DomainValidationError(
                "the built-in quadrature covers n = 3 only; pass quad= for other dimensions"
            )
        quad = build_sphere_quadrature(2 * (policy.max_terms - 1) + 2)
    if quad.dim != geom.n:
        raise DomainValidationError("quadrature dimension does not match the geometry")

    f_out = np.array([float(data.outer(node)) for node in quad.nodes])
    f_in = np.array([float(data.inner(node)) for node in quad.nodes])
    if not (np.all(np.isfinite(f_out)) and np.all(np.isfinite(f_in))):
        raise DomainValidationError("boundary data must be finite on all sampled directions")
    fmax_out = float(np.max(np.abs(f_out))) if f_out.size else 0.0
    fmax_in = float(np.max(np.abs(f_in))) if f_in.size else 0.0

    n, a, omega = geom.n, geom.a, geom.omega
    lam = 0.5 * (n - 2)
    denom0 = 1.0 - a ** (n - 2)
    t = np.clip(quad.nodes @ (xv / r), -1.0, 1.0)
    w = quad.weights / omega  # normalized surface measure

    # quadrature degree 2M + 2 covers mode M; invert that sizing rule
    usable_modes = (quad.max_exact_degree - 2) // 2
    if usable_modes < 0:
        raise QuadratureDegreeError("quadrature cannot integrate even the constant mode")
    mode_cap = min(policy.max_terms, usable_modes + 1)

    def triples():
        A = a ** (n - 2)  # a^(2m+n-2)
        rbeta = r ** (n - 2)  # r^(2m+n-2)
        rp = 1.0  # r^m
        qin = (a / r) ** (n - 2)  # (a/r)^(m+n-2)
        binom = 1.0  # C(n+m-3, m)
        m = 0
        for p in iter_gegenbauer(lam, t):
            beta = 2 * m + n - 2
            z = (beta / (n - 2)) * p
            i_out = float(w @ (f_out * z))
            i_in = float(w @ (f_in * z))
            b_rm = (1.0 - A / rbeta) / (1.0 - A) * rp  # b_m(r) r^m
            c_rm = qin * (1.0 - rbeta) / (1.0 - A)  # c_m(r) r^m
            term = b_rm * i_out + c_rm * i_in
            dm = binom * beta / (n - 2)
            env = dm * (rp * fmax_out + qin * fmax_in) / denom0
            rho = ((n + m - 2) / (m + 1)) * ((2 * m + n) / (2 * m + n - 2)) * max(r, a / r)
            yield term, env, rho
            A *= a * a
            rbeta *= r * r
            rp *= r
            qin *= a / r
            binom *= (n + m - 2) / (m + 1)
            m += 1

    eff = TruncationPolicy(
        abs_tol=policy.abs_tol, max_terms=mode_cap, tail_safety=policy.tail_safety
    )
    res = sum_series(triples(), eff)
    if not res.converged and mode_cap < policy.max_terms:
        raise QuadratureDegreeError(
            f"truncation needs modes beyond degree {quad.max_exact_degree} "
            "that the supplied quadrature integrates exactly"
        )
    return res

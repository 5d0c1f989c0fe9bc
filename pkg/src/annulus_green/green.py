"""Green and Robin functions of the n-dimensional annulus.

Two evaluation routes for the Green function: fundamental solution minus a
correction series (valid everywhere off the diagonal, including coincident
radii), and a purely modal radius-ordered series (faster off the diagonal,
undefined at coincident radii).  The Robin function, its radial gradient
r R'(r), the derivative of that gradient, and the planar (n = 2) Robin family
are all diagonal series over the harmonic-space dimensions.

Every power of the radii is carried incrementally as a product of per-mode
factors in (0, 1), so deep truncations neither overflow nor divide
underflowed quantities.
"""

from __future__ import annotations

import math

import numpy as np

from .core import (
    AnnulusGeometry,
    ArrayLike,
    DomainValidationError,
    EvalResult,
    SingularityError,
    TruncationPolicy,
    newtonian_potential,
)
from .specfun import _clamp_argument, iter_gegenbauer
from .summation import sum_series

# below this separation the subtraction against the fundamental solution is
# pure cancellation; callers wanting diagonal values should use robin_eval
NEAR_DIAGONAL = 1e-6


def modal_coefficient(geom: AnnulusGeometry, m: int, r: float, s: float) -> float:
    """Radius-ordered coefficient of the degree-m zonal kernel in the Green
    series, including the 1/omega prefactor.

    Vanishes when either radius sits on a boundary sphere, is symmetric in
    (r, s), and is positive strictly inside.
    """
    geom.require_series_dim()
    if m < 0:
        raise DomainValidationError(f"mode must be >= 0, got {m!r}")
    lo = geom.clamp_radius(min(r, s))
    hi = geom.clamp_radius(max(r, s))
    n, a = geom.n, geom.a
    beta = 2 * m + n - 2
    big_a = a**beta
    return (
        (lo**beta - big_a)
        * (1.0 - hi**beta)
        / (beta * (lo * hi) ** (m + n - 2) * (1.0 - big_a) * geom.omega)
    )


def _correction_triples(n: int, a: float, r: float, s: float, t: float, omega: float):
    """Modes of the regular-part series subtracted from the fundamental solution.

    The mode coefficient divided by (rs)^(m+n-2) splits into four products
    g1 - g2 - g3 + g4 whose per-step ratios all lie in (0, 1) for interior
    radii, which is what makes deep sums underflow-safe.  The envelope keeps
    only the two outer products (the subtracted ones are positive).
    """
    lam = 0.5 * (n - 2)
    lo, hi = (r, s) if r <= s else (s, r)
    q1 = lo * hi
    q2 = a * a * lo / hi
    q3 = a * a * hi / lo
    q4 = a * a / (lo * hi)
    g1 = 1.0
    g2 = (a / hi) ** (n - 2)
    g3 = (a / lo) ** (n - 2)
    g4 = (a / (lo * hi)) ** (n - 2)
    big_a = a ** (n - 2)
    binom = 1.0
    env_k = 1.0 / ((n - 2) * omega * (1.0 - a ** (n - 2)))
    qmax = max(q1, q4)
    m = 0
    for p in iter_gegenbauer(lam, t):
        beta = 2 * m + n - 2
        z = (beta / (n - 2)) * p
        coeff = (g1 - g2 - g3 + g4) / (beta * (1.0 - big_a))
        yield coeff * z / omega, env_k * binom * (g1 + g4), (n + m - 2) / (m + 1) * qmax
        g1 *= q1
        g2 *= q2
        g3 *= q3
        g4 *= q4
        big_a *= a * a
        binom *= (n + m - 2) / (m + 1)
        m += 1


def green_eval(
    geom: AnnulusGeometry, x: ArrayLike, y: ArrayLike, policy: TruncationPolicy
) -> EvalResult:
    """Dirichlet Green function of the annulus at (x, y), x != y.

    Fundamental solution minus the correction series; valid for radii in the
    closed interval [a, 1] (so boundary points are admissible and give zero
    up to the tail bound) and in particular at coincident radii |x| = |y|.
    """
    geom.require_series_dim()
    xv = geom.point(x)
    yv = geom.point(y)
    r = geom.clamp_radius(float(np.linalg.norm(xv)))
    s = geom.clamp_radius(float(np.linalg.norm(yv)))
    d = float(np.linalg.norm(xv - yv))
    if d < NEAR_DIAGONAL:
        raise SingularityError(
            f"|x - y| = {d} is inside the near-diagonal guard {NEAR_DIAGONAL}; "
            "diagonal values come from robin_eval"
        )
    newt = newtonian_potential(geom, xv, yv)
    t = _clamp_argument(float(xv @ yv) / (r * s))
    res = sum_series(_correction_triples(geom.n, geom.a, r, s, t, geom.omega), policy)
    return EvalResult(
        value=newt - res.value,
        terms_used=res.terms_used,
        tail_bound=res.tail_bound,
        converged=res.converged,
    )


def _modal_triples(n: int, a: float, lo: float, hi: float, t: float, omega: float):
    """Modes of the radius-ordered Green series (lo < hi strictly)."""
    lam = 0.5 * (n - 2)
    hi_pow = hi ** (2 - n)  # hi^(2-n) (lo/hi)^m
    q = lo / hi
    q4 = a * a / (lo * hi)
    g4 = (a / (lo * hi)) ** (n - 2)  # A / (lo*hi)^(m+n-2)
    hib = hi ** (n - 2)  # hi^(2m+n-2)
    big_a = a ** (n - 2)
    binom = 1.0
    env_k = 1.0 / ((n - 2) * omega * (1.0 - a ** (n - 2)))
    m = 0
    for p in iter_gegenbauer(lam, t):
        beta = 2 * m + n - 2
        z = (beta / (n - 2)) * p
        coeff = (hi_pow - g4) * (1.0 - hib) / (beta * (1.0 - big_a))
        yield coeff * z / omega, env_k * binom * hi_pow, (n + m - 2) / (m + 1) * q
        hi_pow *= q
        g4 *= q4
        hib *= hi * hi
        big_a *= a * a
        binom *= (n + m - 2) / (m + 1)
        m += 1


def green_piecewise_eval(
    geom: AnnulusGeometry, x: ArrayLike, y: ArrayLike, policy: TruncationPolicy
) -> EvalResult:
    """Green function from the radius-ordered modal series, |x| != |y|.

    Coincident radii make every mode the same size, so that case is refused
    and callers are pointed at green_eval, which stays valid there.
    """
    geom.require_series_dim()
    xv = geom.point(x)
    yv = geom.point(y)
    r = geom.clamp_radius(float(np.linalg.norm(xv)))
    s = geom.clamp_radius(float(np.linalg.norm(yv)))
    if abs(r - s) <= 1e-9:
        raise DomainValidationError(
            f"|x| = {r} and |y| = {s} are (numerically) equal; use green_eval for "
            "coincident radii"
        )
    lo, hi = (r, s) if r < s else (s, r)
    t = _clamp_argument(float(xv @ yv) / (r * s))
    return sum_series(_modal_triples(geom.n, geom.a, lo, hi, t, geom.omega), policy)


def _radial_state(n: int, a: float, r: float):
    """Shared per-mode radial products for the diagonal (Robin) series.

    Yields (m, binom, one_minus_A, t1, t2, t4) with
      t1 = r^(2m), t2 = a^(2m+n-2) / r^(n-2), t4 = a^(2m+n-2) / r^(2m+2n-4),
    and binom = C(n+m-3, m); all advance by per-step factors in (0, 1).
    """
    t1 = 1.0
    t2 = (a / r) ** (n - 2)
    t4 = a ** (n - 2) / r ** (2 * (n - 2))
    big_a = a ** (n - 2)
    binom = 1.0
    q1 = r * r
    q2 = a * a
    q4 = (a / r) ** 2
    m = 0
    while True:
        yield m, binom, 1.0 - big_a, t1, t2, t4
        t1 *= q1
        t2 *= q2
        t4 *= q4
        big_a *= a * a
        binom *= (n + m - 2) / (m + 1)
        m += 1


def robin_eval(geom: AnnulusGeometry, r: float, policy: TruncationPolicy) -> EvalResult:
    """Robin function (diagonal regular part of the Green function) at radius r.

    Negative on (a, 1) and divergent toward both boundary spheres; near the
    boundaries the policy budget decides how deep the series goes, and an
    exhausted budget is reported through converged = False.
    """
    geom.require_series_dim()
    geom.require_interior_radius(r)
    n, a, omega = geom.n, geom.a, geom.omega
    env_k = 1.0 / ((n - 2) * omega * (1.0 - a ** (n - 2)))
    qmax = max(r * r, (a / r) ** 2)

    def triples():
        for m, binom, one_minus_a, t1, t2, t4 in _radial_state(n, a, r):
            # numerator as a sum of two nonnegative pieces: no cancellation blowup
            term = -binom * ((t1 - t2) + (t4 - t2)) / ((n - 2) * one_minus_a * omega)
            env = env_k * binom * (t1 + t4)
            rho = (n + m - 2) / (m + 1) * qmax
            yield term, env, rho

    return sum_series(triples(), policy)


def robin_radial_gradient(
    geom: AnnulusGeometry, r: float, policy: TruncationPolicy
) -> EvalResult:
    """The radial combination r * R'(r) of the Robin function.

    Strictly decreasing in r, +inf toward the inner sphere and -inf toward
    the outer sphere, so its unique zero is the radial critical point.
    """
    geom.require_series_dim()
    geom.require_interior_radius(r)
    n, a, omega = geom.n, geom.a, geom.omega
    return sum_series(
        _gradient_triples(n, a, r, scale=-2.0 / omega), policy
    )


def _gradient_triples(n: int, a: float, r: float, scale: float):
    q1 = r * r
    q4 = (a / r) ** 2
    env_k = abs(scale) / ((n - 2) * (1.0 - a ** (n - 2)))
    for m, binom, one_minus_a, t1, t2, t4 in _radial_state(n, a, r):
        bracket = (2 - m - n) * t4 + m * t1 + (n - 2) * t2
        term = scale * binom * bracket / ((n - 2) * one_minus_a)
        env = env_k * binom * ((m + n - 2) * t4 + m * t1 + (n - 2) * t2)
        if m == 0:
            rho = math.inf
        else:
            rho = (n + m - 2) / (m + 1) * max(
                (m + n - 1) / (m + n - 2) * q4, (m + 1) / m * q1, a * a
            )
        yield term, env, rho


def critical_equation_eval(
    geom: AnnulusGeometry, r: float, policy: TruncationPolicy
) -> EvalResult:
    """The concentration-radius root equation: the gradient series without its
    -2/omega prefactor.  Shares its unique zero with robin_radial_gradient."""
    geom.require_series_dim()
    geom.require_interior_radius(r)
    return sum_series(_gradient_triples(geom.n, geom.a, r, scale=1.0), policy)


def robin_radial_gradient_derivative(
    geom: AnnulusGeometry, r: float, policy: TruncationPolicy
) -> EvalResult:
    """Derivative in r of the radial gradient r * R'(r); negative on (a, 1)."""
    geom.require_series_dim()
    geom.require_interior_radius(r)
    n, a, omega = geom.n, geom.a, geom.omega
    q1 = r * r
    q4 = (a / r) ** 2
    env_k = 2.0 / (omega * (n - 2) * (1.0 - a ** (n - 2)) * r)

    def triples():
        for m, binom, one_minus_a, t1, t2, t4 in _radial_state(n, a, r):
            c4 = m + n - 2
            bracket = (2.0 * c4 * c4 * t4 + 2.0 * m * m * t1 - (n - 2) ** 2 * t2) / r
            term = -2.0 * binom * bracket / (omega * (n - 2) * one_minus_a)
            env = env_k * binom * (2.0 * c4 * c4 * t4 + 2.0 * m * m * t1 + (n - 2) ** 2 * t2)
            if m == 0:
                rho = math.inf
            else:
                rho = (n + m - 2) / (m + 1) * max(
                    ((m + n - 1) / (m + n - 2)) ** 2 * q4,
                    ((m + 1) / m) ** 2 * q1,
                    a * a,
                )
            yield term, env, rho

    return sum_series(triples(), policy)


def _check_planar(a: float, r: float) -> None:
    if not (0.0 < a < 1.0):
        raise DomainValidationError(f"inner radius must satisfy 0 < a < 1, got {a!r}")
    if not (a < r < 1.0):
        raise DomainValidationError(f"radius {r} must lie strictly between a = {a} and 1")


def robin2d_eval(a: float, r: float, policy: TruncationPolicy) -> EvalResult:
    """Planar Robin function: -log^2 r / log a plus the mode series.

    Divergent (to +inf) toward both circles; strictly convex inside, so its
    unique critical point is a radial minimum.
    """
    _check_planar(a, r)
    closed = -math.log(r) ** 2 / math.log(a)
    qmax = max(r * r, (a / r) ** 2)

    def triples():
        r2m = 1.0
        a2m = 1.0
        ar2m = 1.0
        m = 0
        while True:
            m += 1
            r2m *= r * r
            a2m *= a * a
            ar2m *= (a / r) ** 2
            term = (r2m - 2.0 * a2m + ar2m) / (m * (1.0 - a2m))
            env = (r2m + 2.0 * a2m + ar2m) / (m * (1.0 - a * a))
            yield term, env, qmax

    res = sum_series(triples(), policy)
    return EvalResult(closed + res.value, res.terms_used, res.tail_bound, res.converged)


def robin2d_first(a: float, r: float, policy: TruncationPolicy) -> EvalResult:
    """Derivative of the planar Robin function; -inf at the inner circle,
    +inf at the outer circle, with a single interior zero."""
    _check_planar(a, r)
    closed = -2.0 * math.log(r) / (r * math.log(a))
    qmax = max(r * r, (a / r) ** 2)

    def triples():
        r_odd = 1.0 / r  # r^(2m-1)
        a2m = 1.0
        ar_odd = 1.0 / r  # a^(2m) r^(-2m-1)
        q4 = (a / r) ** 2
        while True:
            r_odd *= r * r
            a2m *= a * a
            ar_odd *= q4
            term = 2.0 * (r_odd - ar_odd) / (1.0 - a2m)
            env = 2.0 * (r_odd + ar_odd) / (1.0 - a * a)
            yield term, env, qmax

    res = sum_series(triples(), policy)
    return EvalResult(closed + res.value, res.terms_used, res.tail_bound, res.converged)


def robin2d_second(a: float, r: float, policy: TruncationPolicy) -> EvalResult:
    """Second derivative of the planar Robin function; positive on all of (a, 1)."""
    _check_planar(a, r)
    closed = -2.0 * (1.0 - math.log(r)) / (r * r * math.log(a))
    q1 = r * r
    q4 = (a / r) ** 2

    def triples():
        r_even = 1.0 / (r * r)  # r^(2m-2)
        a2m = 1.0
        ar_even = 1.0 / (r * r)  # a^(2m) r^(-2m-2)
        m = 0
        while True:
            m += 1
            r_even *= r * r
            a2m *= a * a
            ar_even *= q4
            term = 2.0 * ((2 * m - 1) * r_even + (2 * m + 1) * ar_even) / (1.0 - a2m)
            env = 2.0 * ((2 * m - 1) * r_even + (2 * m + 1) * ar_even) / (1.0 - a * a)
            rho = max((2 * m + 1) / (2 * m - 1) * q1, (2 * m + 3) / (2 * m + 1) * q4)
            yield term, env, rho

    res = sum_series(triples(), policy)
    return EvalResult(closed + res.value, res.terms_used, res.tail_bound, res.converged)

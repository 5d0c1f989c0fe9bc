"""Gegenbauer polynomials, zonal harmonics, and harmonic-space dimensions.

The three-term recurrence is the workhorse for polynomial evaluation.  The
finite expansion of the zonal kernel in powers of the inner product is kept
as an independent cross-check path, and the two routes are tied together by
the endpoint identity P_m(1) = C(n+m-3, m) for the parameter (n-2)/2.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

import numpy as np

from .core import (
    ArrayLike,
    DomainValidationError,
    EvalResult,
    TruncationPolicy,
    as_coords,
    require_unit,
)
from .summation import sum_series

Scalar = Union[float, np.ndarray]

_T_TOL = 1e-12


def _check_order(lam: float) -> float:
    if not math.isfinite(lam) or lam <= 0.0:
        raise DomainValidationError(f"Gegenbauer parameter must be positive, got {lam!r}")
    return float(lam)


def _clamp_argument(t: float) -> float:
    if not math.isfinite(t) or abs(t) > 1.0 + _T_TOL:
        raise DomainValidationError(f"polynomial argument must lie in [-1, 1], got {t!r}")
    return min(1.0, max(-1.0, float(t)))


def iter_gegenbauer(lam: float, t: Scalar) -> Iterator[Scalar]:
    """Yield P_0(t), P_1(t), ... for the weight (1 - 2rt + r^2)^(-lam).

    Recurrence: (m+1) P_{m+1} = 2t(m+lam) P_m - (m+2lam-1) P_{m-1}.
    Works elementwise when ``t`` is an ndarray.
    """
    p_prev: Scalar = 0.0
    p: Scalar = 1.0 + 0.0 * t
    m = 0
    while True:
        yield p
        if m == 0:
            nxt = (2.0 * lam) * t * p
        else:
            nxt = (2.0 * t * (m + lam) * p - (m + 2.0 * lam - 1.0) * p_prev) / (m + 1.0)
        p_prev, p = p, nxt
        m += 1


def gegenbauer_eval(lam: float, m: int, t: float) -> float:
    """P_m(t) for parameter lam > 0, |t| <= 1, via the three-term recurrence."""
    lam = _check_order(lam)
    if m < 0:
        raise DomainValidationError(f"degree must be >= 0, got {m!r}")
    tc = _clamp_argument(t)
    it = iter_gegenbauer(lam, tc)
    for _ in range(m):
        next(it)
    return float(next(it))


def gegenbauer_endpoint_exact(n: int, m: int) -> int:
    """P_m(1) for parameter (n-2)/2, computed in exact rational arithmetic.

    The result is always the integer C(n+m-3, m); a non-integer intermediate
    would indicate a recurrence defect, so that case raises.
    """
    if n < 3:
        raise DomainValidationError(f"needs n >= 3, got {n!r}")
    if m < 0:
        raise DomainValidationError(f"degree must be >= 0, got {m!r}")
    lam = Fraction(n - 2, 2)
    p_prev, p = Fraction(0), Fraction(1)
    for k in range(m):
        if k == 0:
            nxt = 2 * lam
        else:
            nxt = (2 * (k + lam) * p - (k + 2 * lam - 1) * p_prev) / (k + 1)
        p_prev, p = p, nxt
    if p.denominator != 1:
        raise ArithmeticError(f"endpoint value is not integral: {p}")
    return int(p)


def gegenbauer_generating_partial_sum(lam: float, t: float, r: float, m_max: int) -> float:
    """Partial sum over m = 0..m_max of P_m(t) r^m.

    Converges to (1 - 2rt + r^2)^(-lam) as m_max grows; requires 0 <= r < 1.
    """
    lam = _check_order(lam)
    tc = _clamp_argument(t)
    if not (0.0 <= r < 1.0):
        raise DomainValidationError(f"generating variable must satisfy 0 <= r < 1, got {r!r}")
    if m_max < 0:
        raise DomainValidationError(f"m_max must be >= 0, got {m_max!r}")
    total = 0.0
    rp = 1.0
    it = iter_gegenbauer(lam, tc)
    for _ in range(m_max + 1):
        total += float(next(it)) * rp
        rp *= r
    return total


def gegenbauer_generating_sum(
    lam: float, t: float, r: float, policy: TruncationPolicy
) -> EvalResult:
    """Policy-truncated generating series with a certified tail bound.

    The envelope uses |P_m(t)| <= P_m(1) = C(m+2lam-1, m); the coefficient
    ratio (m+2lam)/(m+1) is monotone toward 1 from either side, so the
    geometric ratio bound takes the max against 1.
    """
    lam = _check_order(lam)
    tc = _clamp_argument(t)
    if not (0.0 <= r < 1.0):
        raise DomainValidationError(f"generating variable must satisfy 0 <= r < 1, got {r!r}")

    def triples():
        coeff = 1.0  # C(m + 2 lam - 1, m), the t = 1 polynomial value
        rp = 1.0
        m = 0
        for p in iter_gegenbauer(lam, tc):
            crat = (m + 2.0 * lam) / (m + 1.0)
            yield float(p) * rp, coeff * rp, r * max(1.0, crat)
            coeff *= crat
            rp *= r
            m += 1

    return sum_series(triples(), policy)


def harmonic_space_dim(n: int, m: int) -> int:
    """Dimension of the space of degree-m spherical harmonics on S^{n-1}, n >= 3.

    Uses the product form (2m+n-2)/(n-2) * C(n+m-3, m) with exact integer
    arithmetic; equals the diagonal value of the degree-m zonal kernel.
    """
    if n < 3:
        raise DomainValidationError(f"needs n >= 3, got {n!r}")
    if m < 0:
        raise DomainValidationError(f"degree must be >= 0, got {m!r}")
    if m == 0:
        return 1
    num = (2 * m + n - 2) * math.comb(n + m - 3, m)
    q, rem = divmod(num, n - 2)
    if rem:
        raise ArithmeticError(f"dimension formula not integral for n={n}, m={m}")
    return q


@lru_cache(maxsize=None)
def _zonal_coeffs(n: int, m: int) -> tuple[float, ...]:
    """Coefficient of (x.xi)^(m-2k) |x|^(2k) in the degree-m zonal kernel, per k.

    The rising even product n(n+2)...(n+2(m-k-2)) is empty (= 1) when it has
    no factors; exact rationals keep the alternating coefficients clean
    before the final float conversion.
    """
    out = []
    for k in range(m // 2 + 1):
        prod = 1
        for j in range(m - k - 1):
            prod *= n + 2 * j
        c = Fraction(
            (-1) ** k * (n + 2 * m - 2) * prod,
            2**k * math.factorial(k) * math.factorial(m - 2 * k),
        )
        out.append(float(c))
    return tuple(out)


def zonal_direct(n: int, m: int, x: ArrayLike, xi: ArrayLike) -> float:
    """Degree-m zonal kernel from its finite inner-product expansion.

    ``x`` may be any vector (the kernel is homogeneous of degree m in x);
    ``xi`` must be a unit vector.
    """
    if n < 3:
        raise DomainValidationError(f"needs n >= 3, got {n!r}")
    if m < 0:
        raise DomainValidationError(f"degree must be >= 0, got {m!r}")
    xv = as_coords(x)
    xiv = require_unit(xi)
    if xv.shape != (n,) or xiv.shape != (n,):
        raise DomainValidationError("x and xi must both be vectors of R^n")
    if m == 0:
        return 1.0
    dot = float(xv @ xiv)
    nx2 = float(xv @ xv)
    total = 0.0
    for k, c in enumerate(_zonal_coeffs(n, m)):
        total += c * dot ** (m - 2 * k) * nx2**k
    return total


def zonal_from_gegenbauer(n: int, m: int, xprime: ArrayLike, yprime: ArrayLike) -> float:
    """Degree-m zonal kernel on unit vectors via the Gegenbauer route.

    Z_m(x', y') = (2m+n-2)/(n-2) * P_m(x'.y') for the parameter (n-2)/2.
    """
    if n < 3:
        raise DomainValidationError(f"needs n >= 3, got {n!r}")
    xp = require_unit(xprime)
    yp = require_unit(yprime)
    if xp.shape != (n,) or yp.shape != (n,):
        raise DomainValidationError("arguments must be unit vectors of R^n")
    t = _clamp_argument(float(xp @ yp))
    return (2 * m + n - 2) / (n - 2) * gegenbauer_eval(0.5 * (n - 2), m, t)


def zonal_2d(m: int, theta: float, phi: float) -> float:
    """Planar zonal kernel 2 cos(m (theta - phi)) for degree m >= 1."""
    if m < 1:
        raise DomainValidationError("degree must be >= 1 (the degree-0 kernel is the constant 1)")
    return 2.0 * math.cos(m * (theta - phi))

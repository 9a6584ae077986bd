"""One-dimensional adaptive quadrature and root bracketing.

The integrator is bisection-refined Simpson: each interval is accepted when
the two-half refinement changes the Simpson value by less than 15x the local
tolerance (the classical Richardson estimate), otherwise it is split.  Known
kink locations can be passed so the subdivision never straddles a corner of
a piecewise-defined integrand; this keeps convergence fast for truncated
cones and table moduli.

A hard evaluation budget turns runaway refinements into errors instead of
silent inaccuracy.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Sequence


class QuadratureError(RuntimeError):
    """Raised when an integral cannot be computed within its budget."""


DEFAULT_ABS_TOL = 1e-10
DEFAULT_REL_TOL = 1e-10
DEFAULT_MAX_EVALS = 1_000_000


def _simpson(fa: float, fm: float, fb: float, h: float) -> float:
    return (h / 6.0) * (fa + 4.0 * fm + fb)


def _adaptive_piece(f, a, b, fa, fm, fb, whole, tol, evals, max_evals, depth):
    """Recursive worker. Returns (value, error_estimate, evals)."""
    m = 0.5 * (a + b)
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    evals += 2
    if evals > max_evals:
        raise QuadratureError(
            f"adaptive Simpson exceeded its evaluation budget ({max_evals})"
        )
    left = _simpson(fa, flm, fm, m - a)
    right = _simpson(fm, frm, fb, b - m)
    delta = left + right - whole
    # 15 = 2**4 - 1: Richardson factor for Simpson's rule.
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0, abs(delta) / 15.0, evals
    lv, le, evals = _adaptive_piece(
        f, a, m, fa, flm, fm, left, tol / 2.0, evals, max_evals, depth - 1
    )
    rv, re, evals = _adaptive_piece(
        f, m, b, fm, frm, fb, right, tol / 2.0, evals, max_evals, depth - 1
    )
    return lv + rv, le + re, evals


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    *,
    abs_tol: float = DEFAULT_ABS_TOL,
    rel_tol: float = DEFAULT_REL_TOL,
    max_evals: int = DEFAULT_MAX_EVALS,
    kinks: Iterable[float] = (),
    max_depth: int = 60,
) -> tuple[float, float]:
    """Integrate ``f`` on [a, b]; returns (value, error_bound).

    ``kinks`` lists interior points where the integrand may lose smoothness;
    the interval is pre-split there.  Tolerances combine as
    ``tol = max(abs_tol, rel_tol * |coarse estimate|)`` and are divided
    between subintervals proportionally to a first sweep.
    """
    if not (b > a):
        if b == a:
            return 0.0, 0.0
        value, err = adaptive_simpson(
            f, b, a, abs_tol=abs_tol, rel_tol=rel_tol, max_evals=max_evals, kinks=kinks
        )
        return -value, err

    pts = [a]
    for k in sorted(set(float(k) for k in kinks)):
        if a < k < b:
            pts.append(k)
    pts.append(b)

    # Coarse pass to set the relative-tolerance scale.
    coarse = 0.0
    cache = []
    evals = 0
    for lo, hi in zip(pts[:-1], pts[1:]):
        flo, fmid, fhi = f(lo), f(0.5 * (lo + hi)), f(hi)
        evals += 3
        s = _simpson(flo, fmid, fhi, hi - lo)
        cache.append((lo, hi, flo, fmid, fhi, s))
        coarse += s
    tol = max(abs_tol, rel_tol * abs(coarse))

    total = 0.0
    err_total = 0.0
    span = b - a
    for lo, hi, flo, fmid, fhi, s in cache:
        piece_tol = max(tol * (hi - lo) / span, 1e-300)
        v, e, evals = _adaptive_piece(
            f, lo, hi, flo, fmid, fhi, s, piece_tol, evals, max_evals, max_depth
        )
        total += v
        err_total += e
    return total, err_total


def power_segment_integral(c0: float, gamma: float, lo: float, hi: float) -> float:
    """Exact value of ``integral of c0 * t**gamma`` over [lo, hi], gamma > -1.

    Used for closed-form singular heads where an integrand behaves like a
    pure power near zero and Simpson refinement would be wasteful.
    """
    if gamma <= -1.0:
        raise QuadratureError(f"power head t**{gamma} is not integrable near 0")
    p = gamma + 1.0
    return c0 * (hi**p - lo**p) / p


def bisect_increasing(
    g: Callable[[float], float],
    target: float,
    lo: float,
    hi: float,
    *,
    rel_tol: float = 1e-12,
    max_iter: int = 400,
) -> float:
    """Solve ``g(h) = target`` for increasing ``g`` by bisection.

    The bracket [lo, hi] is expanded geometrically if it does not already
    straddle the target.  Terminates when the bracket width drops below
    ``rel_tol`` relative to the midpoint.
    """
    if lo <= 0.0:
        lo = 1e-30
    glo = g(lo)
    ghi = g(hi)
    grow = 0
    while glo > target and grow < 200:
        hi = lo
        ghi = glo
        lo /= 2.0
        glo = g(lo)
        grow += 1
    while ghi < target and grow < 400:
        lo = hi
        glo = ghi
        hi *= 2.0
        ghi = g(hi)
        grow += 1
    if glo > target or ghi < target:
        raise QuadratureError("bisection could not bracket the target value")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if (hi - lo) <= rel_tol * max(abs(mid), 1e-300):
            return mid
        if g(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def sorted_unique(values: Sequence[float], eps: float = 1e-15) -> list[float]:
    """Sort and deduplicate float breakpoints (tolerance ``eps``)."""
    out: list[float] = []
    for v in sorted(float(v) for v in values):
        if not out or v - out[-1] > eps:
            out.append(v)
    return out


def integral_is_finite(value: float) -> bool:
    return math.isfinite(value)


def _power_term(coeff: float, q: float, s0: float, s1: float) -> float:
    """``coeff * integral of t**(q-1) over [s0, s1]`` in closed form.

    Endpoints may be 0 or inf wherever the integral converges; anything
    divergent raises instead of returning inf/nan.
    """
    if coeff == 0.0:
        return 0.0
    if q == 0.0:
        if s0 <= 0.0 or math.isinf(s1):
            raise QuadratureError("divergent logarithmic power integral")
        return coeff * math.log(s1 / s0)
    if q < 0.0 and s0 <= 0.0:
        raise QuadratureError(f"power integral t**{q - 1:g} diverges at 0")
    if q > 0.0 and math.isinf(s1):
        raise QuadratureError(f"power integral t**{q - 1:g} diverges at infinity")
    lo = s0**q
    hi = 0.0 if math.isinf(s1) else s1**q
    return coeff * (hi - lo) / q


def piecewise_power_integral(
    pieces: Sequence[tuple[float, float, float, float, float]],
    lo: float,
    hi: float,
    weight_exponent: float = 0.0,
) -> float:
    """``integral over [lo, hi] of f(t) * t**weight_exponent`` for piecewise-power f.

    ``pieces`` rows are ``(s0, s1, sigma, p, tau)`` meaning
    ``f(t) = sigma * t**p + tau`` on [s0, s1] (``s1`` may be inf).  Exact up to
    floating point; raises QuadratureError on divergence.
    """
    k = float(weight_exponent)
    total = 0.0
    for s0, s1, sigma, p, tau in pieces:
        a = max(float(s0), float(lo))
        b = min(float(s1), float(hi))
        if b <= a:
            continue
        total += _power_term(float(sigma), float(p) + k + 1.0, a, b)
        total += _power_term(float(tau), k + 1.0, a, b)
    return total

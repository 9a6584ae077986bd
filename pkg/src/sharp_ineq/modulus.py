"""Moduli of continuity: admissible gauges ``omega`` for smoothness classes.

Two families are supported.

``PowerModulus(alpha)``
    ``omega(t) = t**alpha`` with ``0 < alpha <= 1``.  Concave, unbounded,
    with exact antiderivative ``t**(1+alpha) / (1+alpha)``.

``TableModulus(points)``
    Concave piecewise-linear interpolation through ``(t_i, w_i)`` starting at
    ``(0, 0)``, constant beyond the last breakpoint.  Concavity of the nodes
    (checked at construction) implies semi-additivity
    ``omega(s + t) <= omega(s) + omega(t)``, which is the property every
    bound in this package actually uses.

``validate`` re-checks the axioms numerically on a caller-supplied grid and
reports violations instead of raising, so deliberately broken tables can be
inspected in tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from . import _kernels

Real = Union[int, float, Fraction]


class Modulus:
    """Common interface; concrete classes implement the hooks below."""

    kind: str

    def __call__(self, t):
        raise NotImplementedError

    def antiderivative(self, t: float) -> float:
        """Exact ``integral of omega on [0, t]``."""
        raise NotImplementedError

    def inverse(self, y: float) -> float:
        """Smallest ``t`` with ``omega(t) >= y`` (``inf`` if unreachable)."""
        raise NotImplementedError

    def eval_fraction(self, t: Fraction) -> Fraction:
        """Exact rational evaluation; raises if the value is irrational."""
        raise NotImplementedError

    def breakpoints(self) -> tuple[float, ...]:
        """Interior points where the derivative may jump (for quadrature)."""
        return ()

    def kernel_params(self):
        """(kind_code, alpha, table_t, table_w) consumed by _kernels."""
        raise NotImplementedError

    def pieces(self, lo: float, hi: float) -> list[tuple[float, float, float, float, float]]:
        """Decompose omega on [lo, hi] into exact power pieces.

        Returns ``(s0, s1, sigma, p, tau)`` tuples with
        ``omega(t) = sigma * t**p + tau`` on each [s0, s1]; the basis of all
        closed-form integrals against the modulus.
        """
        raise NotImplementedError

    def is_bounded(self) -> bool:
        raise NotImplementedError

    def to_config(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class PowerModulus(Modulus):
    alpha: float = 1.0
    kind: str = field(default="power", init=False)

    def __post_init__(self):
        a = float(self.alpha)
        if not (0.0 < a <= 1.0):
            raise ValueError(f"power modulus needs 0 < alpha <= 1, got {self.alpha}")

    def __call__(self, t):
        tv = np.asarray(t, dtype=np.float64)
        out = np.power(tv, self.alpha)
        return out if out.ndim else float(out)

    def antiderivative(self, t: float) -> float:
        p = 1.0 + self.alpha
        return float(t) ** p / p

    def inverse(self, y: float) -> float:
        if y <= 0:
            return 0.0
        return float(y) ** (1.0 / self.alpha)

    def eval_fraction(self, t: Fraction) -> Fraction:
        if self.alpha != 1.0:
            raise ValueError(
                f"t**{self.alpha} is irrational on the lattice; exact mode needs alpha = 1"
            )
        if t < 0:
            raise ValueError("modulus argument must be nonnegative")
        return Fraction(t)

    def kernel_params(self):
        empty = np.zeros(0, dtype=np.float64)
        return _kernels.OMEGA_POWER, float(self.alpha), empty, empty

    def pieces(self, lo: float, hi: float):
        if hi <= lo:
            return []
        return [(float(lo), float(hi), 1.0, float(self.alpha), 0.0)]

    def is_bounded(self) -> bool:
        return False

    def to_config(self) -> dict:
        return {"kind": "power", "alpha": float(self.alpha)}


class TableModulus(Modulus):
    """Concave piecewise-linear modulus through given nodes.

    Parameters
    ----------
    points : sequence of (t, w) pairs
        Must start at (0, 0) with strictly increasing ``t`` and nondecreasing
        ``w``.  Values past the last node are held constant.
    check_concave : bool
        Concavity (nonincreasing chord slopes) is asserted by default; it is
        the constructive guarantee of semi-additivity.  Tests may disable the
        check to build a broken table on purpose and feed it to ``validate``.
    """

    kind = "table"

    def __init__(self, points: Sequence[Sequence[Real]], check_concave: bool = True):
        pts = [(Fraction(str(t)) if not isinstance(t, Fraction) else t,
                Fraction(str(w)) if not isinstance(w, Fraction) else w)
               for t, w in points]
        if len(pts) < 2:
            raise ValueError("table modulus needs at least two nodes")
        if pts[0] != (0, 0):
            raise ValueError("table modulus must start at (0, 0)")
        for (t0, _), (t1, _) in zip(pts, pts[1:]):
            if not t1 > t0:
                raise ValueError("table nodes need strictly increasing t")
        for (_, w0), (_, w1) in zip(pts, pts[1:]):
            if w1 < w0:
                raise ValueError("table values must be nondecreasing")
        if check_concave:
            slopes = [
                (w1 - w0) / (t1 - t0) for (t0, w0), (t1, w1) in zip(pts, pts[1:])
            ]
            for s0, s1 in zip(slopes, slopes[1:]):
                if s1 > s0:
                    raise ValueError(
                        "table modulus must be concave (nonincreasing slopes); "
                        "a convex jump breaks semi-additivity"
                    )
        self._exact = pts
        self._t = np.array([float(t) for t, _ in pts], dtype=np.float64)
        self._w = np.array([float(w) for _, w in pts], dtype=np.float64)
        # cumulative exact integrals at the nodes (trapezoids)
        cum = [Fraction(0)]
        for (t0, w0), (t1, w1) in zip(pts, pts[1:]):
            cum.append(cum[-1] + (t1 - t0) * (w0 + w1) / 2)
        self._cum = cum

    def __call__(self, t):
        tv = np.asarray(t, dtype=np.float64)
        out = np.interp(tv, self._t, self._w)
        return out if out.ndim else float(out)

    def antiderivative(self, t: float) -> float:
        tf = float(t)
        if tf <= 0:
            return 0.0
        idx = int(np.searchsorted(self._t, tf, side="right")) - 1
        if idx >= len(self._t) - 1:
            # beyond the last node the modulus is constant
            full = float(self._cum[-1])
            return full + (tf - float(self._t[-1])) * float(self._w[-1])
        t0, w0 = float(self._t[idx]), float(self._w[idx])
        t1, w1 = float(self._t[idx + 1]), float(self._w[idx + 1])
        frac = (tf - t0) / (t1 - t0)
        w_at = w0 + frac * (w1 - w0)
        return float(self._cum[idx]) + (tf - t0) * (w0 + w_at) / 2.0

    def inverse(self, y: float) -> float:
        if y <= 0:
            return 0.0
        if y > float(self._w[-1]):
            return float("inf")
        idx = int(np.searchsorted(self._w, y, side="left"))
        t0, w0 = float(self._t[idx - 1]), float(self._w[idx - 1])
        t1, w1 = float(self._t[idx]), float(self._w[idx])
        if w1 == w0:
            return t0
        return t0 + (y - w0) * (t1 - t0) / (w1 - w0)

    def eval_fraction(self, t: Fraction) -> Fraction:
        if t < 0:
            raise ValueError("modulus argument must be nonnegative")
        pts = self._exact
        if t >= pts[-1][0]:
            return pts[-1][1]
        for (t0, w0), (t1, w1) in zip(pts, pts[1:]):
            if t0 <= t <= t1:
                return w0 + (t - t0) * (w1 - w0) / (t1 - t0)
        return Fraction(0)

    def breakpoints(self) -> tuple[float, ...]:
        return tuple(float(t) for t in self._t[1:])

    def kernel_params(self):
        return _kernels.OMEGA_TABLE, 1.0, self._t, self._w

    def pieces(self, lo: float, hi: float):
        if hi <= lo:
            return []
        out = []
        cuts = [float(lo)]
        for t in self._t:
            tf = float(t)
            if lo < tf < hi:
                cuts.append(tf)
        cuts.append(float(hi))
        for s0, s1 in zip(cuts, cuts[1:]):
            mid = 0.5 * (s0 + s1)
            idx = int(np.searchsorted(self._t, mid, side="right")) - 1
            if idx >= len(self._t) - 1:
                out.append((s0, s1, 0.0, 1.0, float(self._w[-1])))
            else:
                t0, w0 = float(self._t[idx]), float(self._w[idx])
                t1, w1 = float(self._t[idx + 1]), float(self._w[idx + 1])
                slope = (w1 - w0) / (t1 - t0)
                out.append((s0, s1, slope, 1.0, w0 - slope * t0))
        return out

    def is_bounded(self) -> bool:
        return True

    @property
    def max_value(self) -> float:
        return float(self._w[-1])

    def to_config(self) -> dict:
        return {
            "kind": "table",
            "points": [[float(t), float(w)] for t, w in self._exact],
        }

    def __repr__(self):
        nodes = ", ".join(f"({float(t):g}, {float(w):g})" for t, w in self._exact)
        return f"TableModulus([{nodes}])"


@dataclass
class ModulusValidation:
    ok: bool
    violations: list[str]


def validate(omega: Modulus, grid: Sequence[float], tol: float = 1e-12) -> ModulusValidation:
    """Numerically audit modulus axioms on a grid of sample arguments.

    Checks nonnegativity and omega(0) == 0, monotonicity along the sorted
    grid, and semi-additivity over all grid pairs (evaluation extends past
    the grid, so ``s + t`` never escapes the domain).
    """
    g = np.array(sorted(float(t) for t in grid if t >= 0.0), dtype=np.float64)
    if g.size == 0:
        raise ValueError("validation grid must contain nonnegative points")
    bad: list[str] = []
    vals = np.asarray(omega(g), dtype=np.float64)
    if float(omega(0.0)) != 0.0:
        bad.append("omega(0) != 0")
    if np.any(vals < -tol):
        bad.append("negative values on grid")
    if np.any(np.diff(vals) < -tol):
        i = int(np.argmax(np.diff(vals) < -tol))
        bad.append(f"not nondecreasing near t = {g[i + 1]:g}")
    s = g[:, None] + g[None, :]
    lhs = np.asarray(omega(s), dtype=np.float64)
    rhs = vals[:, None] + vals[None, :]
    mask = lhs > rhs + tol * np.maximum(1.0, np.abs(rhs))
    if np.any(mask):
        i, j = np.argwhere(mask)[0]
        bad.append(
            f"semi-additivity fails at s = {g[i]:g}, t = {g[j]:g}: "
            f"omega(s+t) = {lhs[i, j]:g} > {rhs[i, j]:g}"
        )
    return ModulusValidation(ok=not bad, violations=bad)


def from_config(cfg: dict) -> Modulus:
    kind = cfg.get("kind")
    if kind == "power":
        return PowerModulus(alpha=float(cfg.get("alpha", 1.0)))
    if kind == "table":
        pts = cfg.get("points")
        if not pts:
            raise ValueError("table modulus config needs a 'points' list")
        return TableModulus(pts)
    raise ValueError(f"unknown modulus kind: {kind!r}")

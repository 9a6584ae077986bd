"""Integral calculus on the model spaces: ball integrals, norms, seminorms.

Central quantities
------------------

``ball_integral_of_modulus``
    ``I(h) = integral over B_h of omega(rho(u, 0)) d(mu)``.  This single
    number drives every approximation bound in the package.  Four methods:

    * ``closed_form``   -- power modulus on the continuum:
      ``I(h) = d * 2^(d-m) / (d + alpha) * h^(d + alpha)``;
    * ``radial1d``      -- any modulus on the continuum, via the layer-cake
      reduction ``I(h) = 2^(d-m) * d * integral_0^h omega(t) t^(d-1) dt``;
    * ``lattice_exact`` -- exact enumeration on lattices;
    * ``monte_carlo``   -- uniform sampling, with a reported standard error.

``seminorm_local``
    The averaged-oscillation seminorm at window scale ``h``:
    ``sup over x of | integral over x + B_h of f |``.  Exact on lattices for
    compactly supported functions; a grid-search lower estimate on the
    continuum (the certified value is returned when the model carries one,
    after a consistency check against the search).

``sup_norm``, ``l1_norm``, ``holder_lower_estimate``
    Grid/exhaustive estimates of the uniform norm, the L1 norm, and the
    smoothness constant ``sup |f(x)-f(y)| / omega(rho(x, y))``.

Certified metadata on a ``FunctionModel`` is never trusted blindly: whenever
a computed lower estimate *exceeds* a certified upper value beyond rounding,
a ``CertificationError`` is raised, because that contradicts a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from . import _kernels, _lattice
from ._quad import QuadratureError, adaptive_simpson, piecewise_power_integral
from .modulus import Modulus, PowerModulus
from .space import Space, strict_int_below

# quadrature method names
CLOSED_FORM = "closed_form"
RADIAL1D = "radial1d"
MONTE_CARLO = "monte_carlo"
LATTICE_EXACT = "lattice_exact"

_METHODS = (CLOSED_FORM, RADIAL1D, MONTE_CARLO, LATTICE_EXACT)


class CertificationError(RuntimeError):
    """A computed lower bound exceeded a certified upper bound: proof broken."""


@dataclass(frozen=True)
class QuadratureSpec:
    """How integrals should be evaluated and to what accuracy."""

    method: str = CLOSED_FORM
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    mc_samples: int = 200_000
    seed: int = 0
    max_evals: int = 1_000_000

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ValueError(
                f"unknown quadrature method {self.method!r}; expected one of {_METHODS}"
            )

    def with_method(self, method: str) -> "QuadratureSpec":
        return replace(self, method=method)


def default_spec(space: Space, omega: Modulus, **overrides) -> QuadratureSpec:
    """The natural exact-or-near-exact method for a space/modulus pair."""
    if space.is_lattice:
        method = LATTICE_EXACT
    elif isinstance(omega, PowerModulus):
        method = CLOSED_FORM
    else:
        method = RADIAL1D
    return QuadratureSpec(method=method, **overrides)


@dataclass(frozen=True)
class Estimate:
    """A computed number together with how it was obtained."""

    value: float
    method: str
    error_bound: float = 0.0

    def __float__(self):
        return float(self.value)


@dataclass
class FunctionModel:
    """A function on a space, with optional certified analytic metadata.

    ``evaluator`` maps a batch of points, shape (n, d) float64, to values of
    shape (n,).  ``radial_profile``, when present, asserts that
    ``f(x) = radial_profile(rho(x, 0))`` which unlocks exact 1-D reductions.

    The ``certified_*`` fields are *proved* quantities attached by a
    constructor (closed forms evaluated at construction time), not numerics;
    ``certified_seminorm_h`` is stated at window scale ``seminorm_at_h``.
    """

    name: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    radial_profile: Optional[Callable[[np.ndarray], np.ndarray]] = None
    certified_holder_bound: Optional[float] = None
    certified_sup_norm: Optional[float] = None
    certified_seminorm_h: Optional[float] = None
    seminorm_at_h: Optional[float] = None
    certified_l1: Optional[float] = None
    upper_gradient_bound: Optional[float] = None
    support_radius: Optional[float] = None
    meta: dict = field(default_factory=dict)

    def __call__(self, points):
        pts = np.asarray(points, dtype=np.float64)
        single = pts.ndim == 1
        out = np.asarray(self.evaluator(np.atleast_2d(pts)), dtype=np.float64)
        return float(out[0]) if single else out

    def without_certificates(self) -> "FunctionModel":
        """Copy with all certified norms stripped (geometry hints kept)."""
        return FunctionModel(
            name=self.name + "|uncertified",
            evaluator=self.evaluator,
            radial_profile=self.radial_profile,
            support_radius=self.support_radius,
            meta=dict(self.meta),
        )


def constant_model(space: Space, value: float) -> FunctionModel:
    v = float(value)
    return FunctionModel(
        name=f"const[{v:g}]",
        evaluator=lambda pts: np.full(pts.shape[0], v),
        radial_profile=lambda t: np.full(np.shape(t) or (), v),
        certified_holder_bound=0.0,
        certified_sup_norm=abs(v),
        meta={"radial_pieces": [(0.0, math.inf, 0.0, 1.0, v)]},
    )


# ======================================================================
# Ball integral of the modulus
# ======================================================================


def closed_form_ball_integral(space: Space, omega: Modulus, h: float) -> float:
    """Exact ``I(h)`` for a power modulus on the continuum."""
    if space.is_lattice or not isinstance(omega, PowerModulus):
        raise ValueError("closed form requires a power modulus on the continuum")
    d, m, a = space.d, space.m, omega.alpha
    return d * 2.0 ** (d - m) / (d + a) * float(h) ** (d + a)


def radial_ball_integral(
    space: Space, omega: Modulus, h: float, spec: QuadratureSpec
) -> tuple[float, float]:
    """Layer-cake reduction of ``I(h)`` to one dimension (continuum)."""
    if space.is_lattice:
        raise ValueError("radial reduction applies to continuum spaces only")
    d, m = space.d, space.m
    hf = float(h)
    scale = 2.0 ** (d - m) * d

    def integrand(t: float) -> float:
        return float(omega(t)) * t ** (d - 1)

    val, err = adaptive_simpson(
        integrand,
        0.0,
        hf,
        abs_tol=spec.abs_tol,
        rel_tol=spec.rel_tol,
        max_evals=spec.max_evals,
        kinks=[b for b in omega.breakpoints() if b < hf],
    )
    return scale * val, scale * err


def lattice_ball_integral(space: Space, omega: Modulus, h) -> float:
    """Exact enumeration of ``I(h)`` on a lattice (float arithmetic)."""
    pts = space.enumerate_ball(h)
    dist = np.max(np.abs(pts), axis=1).astype(np.float64)
    return float(np.sum(omega(dist)))


def ball_integral_of_modulus(
    space: Space, omega: Modulus, h, spec: Optional[QuadratureSpec] = None
) -> Estimate:
    """``I(h)``, the ball integral of the modulus, by the requested method."""
    if spec is None:
        spec = default_spec(space, omega)
    space.require_valid_radius(h)
    method = spec.method
    if method == CLOSED_FORM:
        return Estimate(closed_form_ball_integral(space, omega, h), CLOSED_FORM, 0.0)
    if method == RADIAL1D:
        val, err = radial_ball_integral(space, omega, h, spec)
        return Estimate(val, RADIAL1D, err)
    if method == LATTICE_EXACT:
        if not space.is_lattice:
            raise ValueError("lattice_exact requires a lattice space")
        return Estimate(lattice_ball_integral(space, omega, h), LATTICE_EXACT, 0.0)
    if method == MONTE_CARLO:
        mu = float(space.ball_measure(h))
        samples = space.sample_ball(h, spec.mc_samples, spec.seed)
        vals = np.asarray(omega(np.max(np.abs(samples), axis=1)), dtype=np.float64)
        mean = float(vals.mean())
        stderr = float(vals.std(ddof=1) / math.sqrt(len(vals)))
        return Estimate(mu * mean, MONTE_CARLO, mu * stderr)
    raise ValueError(f"unhandled quadrature method {method!r}")


# ======================================================================
# Search grids
# ======================================================================


def continuum_grid(space: Space, window_radius: float, step: float) -> np.ndarray:
    """Uniform search grid over the window, respecting half-line constraints."""
    w = float(window_radius)
    s = float(step)
    if s <= 0:
        raise ValueError("grid step must be positive")
    n = max(1, int(math.ceil(w / s)))
    pos = np.linspace(0.0, w, n + 1)
    full = np.linspace(-w, w, 2 * n + 1)
    axes = [pos] * space.m + [full] * (space.d - space.m)
    grids = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _candidate_points(f: FunctionModel, space: Space) -> np.ndarray:
    """Origin plus declared support boundary points (axis and diagonal)."""
    cands = [space.origin().astype(np.float64)]
    r = f.support_radius
    if r is not None and math.isfinite(r):
        for i in range(space.d):
            e = np.zeros(space.d)
            e[i] = r
            cands.append(e.copy())
            if i >= space.m:
                cands.append(-e)
        diag = np.full(space.d, float(r))
        cands.append(diag)
    return np.array(cands, dtype=np.float64)


def _check_certified_upper(
    estimate: float, certified: Optional[float], what: str, tol: float = 1e-9
) -> None:
    if certified is None:
        return
    slack = tol * max(1.0, abs(certified))
    if estimate > certified + slack:
        raise CertificationError(
            f"computed {what} {estimate!r} exceeds certified value {certified!r}"
        )


# ======================================================================
# Norms and seminorms
# ======================================================================


def sup_norm(
    f: FunctionModel,
    space: Space,
    window_radius: float,
    grid_step: Optional[float] = None,
) -> float:
    """Lower estimate of ``sup |f|`` by exhaustive/grid search.

    Exact on lattices for functions supported inside the window.  On the
    continuum the grid is augmented with the origin and declared support
    boundary, which are the attaining points of every extremal shipped here.
    """
    if f.support_radius is not None and f.support_radius > window_radius:
        raise ValueError(
            f"window radius {window_radius} is smaller than the declared "
            f"support radius {f.support_radius}"
        )
    if space.is_lattice:
        pts = _lattice.window_points(space, int(math.ceil(window_radius)))
        vals = np.abs(f(pts.astype(np.float64)))
        est = float(vals.max())
    else:
        step = grid_step if grid_step is not None else window_radius / 128.0
        pts = continuum_grid(space, window_radius, step)
        vals = np.abs(f(pts))
        extra = np.abs(f(_candidate_points(f, space)))
        est = float(max(vals.max(), extra.max()))
    _check_certified_upper(est, f.certified_sup_norm, "sup norm")
    return est


def l1_norm(
    f: FunctionModel,
    space: Space,
    window_radius: float,
    spec: Optional[QuadratureSpec] = None,
) -> float:
    """``integral |f| d(mu)`` over the window (= over the space when f has
    compact support inside it)."""
    if spec is None:
        spec = QuadratureSpec(method=LATTICE_EXACT if space.is_lattice else RADIAL1D)
    if f.support_radius is not None and f.support_radius > window_radius:
        raise ValueError("window smaller than the declared support radius")
    if space.is_lattice:
        pts = _lattice.window_points(space, int(math.ceil(window_radius)))
        est = float(np.sum(np.abs(f(pts.astype(np.float64)))))
    elif f.radial_profile is not None:
        d, m = space.d, space.m
        scale = 2.0 ** (d - m) * d
        kinks = list(f.meta.get("radial_kinks", ()))

        def integrand(t: float) -> float:
            return abs(float(f.radial_profile(t))) * t ** (d - 1)

        val, _ = adaptive_simpson(
            integrand,
            0.0,
            float(window_radius),
            abs_tol=spec.abs_tol,
            rel_tol=spec.rel_tol,
            max_evals=spec.max_evals,
            kinks=kinks,
        )
        est = scale * val
    elif space.d == 1:
        lo = 0.0 if space.m == 1 else -float(window_radius)

        def scalar(t: float) -> float:
            return abs(float(f(np.array([t]))))

        val, _ = adaptive_simpson(
            scalar,
            lo,
            float(window_radius),
            abs_tol=spec.abs_tol,
            rel_tol=spec.rel_tol,
            max_evals=spec.max_evals,
        )
        est = val
    else:
        rng = np.random.default_rng(spec.seed)
        w = float(window_radius)
        lo = np.where(np.arange(space.d) < space.m, 0.0, -w)
        hi = np.full(space.d, w)
        pts = rng.uniform(0.0, 1.0, size=(spec.mc_samples, space.d)) * (hi - lo) + lo
        vol = float(np.prod(hi - lo))
        est = vol * float(np.mean(np.abs(f(pts))))
    _check_certified_upper(est, f.certified_l1, "L1 norm", tol=1e-6)
    return est


def _ball_average_at(
    f: FunctionModel, space: Space, h, x: np.ndarray, spec: QuadratureSpec,
    mc_offsets: Optional[np.ndarray] = None,
) -> float:
    """``integral over x + B_h of f`` on the continuum (not divided by measure)."""
    hf = float(h)
    ball_mass_fn = f.meta.get("ball_mass_fn")
    if ball_mass_fn is not None:
        return float(ball_mass_fn(space, hf, np.asarray(x, dtype=np.float64)))
    pieces = f.meta.get("radial_pieces")
    if pieces is not None and not np.any(x):
        d, m = space.d, space.m
        return 2.0 ** (d - m) * d * piecewise_power_integral(pieces, 0.0, hf, d - 1)
    if f.radial_profile is not None and not np.any(x):
        d, m = space.d, space.m
        scale = 2.0 ** (d - m) * d
        kinks = [b for b in f.meta.get("radial_kinks", ()) if b < hf]

        def integrand(t: float) -> float:
            return float(f.radial_profile(t)) * t ** (d - 1)

        val, _ = adaptive_simpson(
            integrand, 0.0, hf,
            abs_tol=spec.abs_tol, rel_tol=spec.rel_tol,
            max_evals=spec.max_evals, kinks=kinks,
        )
        return scale * val
    if space.d == 1:
        lo = -hf if space.m == 0 else 0.0

        def scalar(t: float) -> float:
            return float(f(np.array([x[0] + t])))

        kinks = []
        r = f.support_radius
        if r is not None and math.isfinite(r):
            kinks = [c - x[0] for c in (-r, r) if lo < c - x[0] < hf]
        val, _ = adaptive_simpson(
            scalar, lo, hf,
            abs_tol=spec.abs_tol, rel_tol=spec.rel_tol,
            max_evals=spec.max_evals, kinks=kinks,
        )
        return val
    if mc_offsets is None:
        mc_offsets = space.sample_ball(h, spec.mc_samples, spec.seed)
    mu = float(space.ball_measure(h))
    return mu * float(np.mean(f(x[None, :] + mc_offsets)))


def ball_integral_at(
    f: FunctionModel,
    space: Space,
    h,
    x,
    spec: Optional[QuadratureSpec] = None,
    mc_offsets: Optional[np.ndarray] = None,
    lattice_offsets: Optional[np.ndarray] = None,
) -> float:
    """``integral over x + B_h of f d(mu)``: exact sum on lattices, else the
    best continuum path available (exact box mass / radial pieces / adaptive
    1-D / Monte Carlo with shared offsets)."""
    space.require_valid_radius(h)
    if spec is None:
        spec = QuadratureSpec(method=LATTICE_EXACT if space.is_lattice else MONTE_CARLO)
    xv = np.asarray(x, dtype=np.float64)
    if space.is_lattice:
        offs = lattice_offsets
        if offs is None:
            offs = space.enumerate_ball(h).astype(np.float64)
        return float(np.sum(f(xv[None, :] + offs)))
    return _ball_average_at(f, space, h, xv, spec, mc_offsets)


def seminorm_local(
    f: FunctionModel,
    space: Space,
    h,
    window_radius: float,
    spec: Optional[QuadratureSpec] = None,
    grid_step: Optional[float] = None,
    use_certified: bool = True,
) -> float:
    """``sup over x of | integral over x + B_h of f |`` at window scale h.

    Lattice: exact sweep (requires the window to contain the declared
    support dilated by the ball radius).  Continuum: search over a grid of
    translations; with ``use_certified`` the certified value is returned
    after checking it is not *beaten* by the search.
    """
    space.require_valid_radius(h)
    if spec is None:
        spec = QuadratureSpec(method=LATTICE_EXACT if space.is_lattice else MONTE_CARLO)
    certified = None
    if (
        use_certified
        and f.certified_seminorm_h is not None
        and f.seminorm_at_h is not None
        and math.isclose(float(f.seminorm_at_h), float(h), rel_tol=1e-12)
    ):
        certified = f.certified_seminorm_h

    if space.is_lattice:
        k = strict_int_below(h)
        if f.support_radius is not None:
            needed = int(math.ceil(f.support_radius)) + k
            if window_radius < needed:
                raise ValueError(
                    f"window radius {window_radius} too small: need support + ball = {needed}"
                )
        plan = _lattice.make_plan(space, int(math.ceil(window_radius)), space.enumerate_ball(h))
        padded = _lattice.evaluate_padded(plan, f.evaluator)
        sums = _kernels.ball_sums(padded, plan.base_idx, plan.lin_offsets)
        est = float(np.max(np.abs(sums)))
    else:
        hf = float(h)
        if grid_step is None:
            grid_step = hf / 64.0 if space.d == 1 else hf / 8.0
        grid = continuum_grid(space, float(window_radius), grid_step)
        cands = _candidate_points(f, space)
        xs = np.vstack([grid, cands])
        mc_offsets = None
        if space.d >= 2 and f.radial_profile is None:
            mc_offsets = space.sample_ball(h, spec.mc_samples, spec.seed)
        best = 0.0
        for x in xs:
            v = abs(_ball_average_at(f, space, h, x, spec, mc_offsets))
            if v > best:
                best = v
        est = best
    _check_certified_upper(est, certified, f"seminorm at h={h}", tol=1e-8)
    if certified is not None:
        return float(certified)
    return est


def seminorm_global(
    f: FunctionModel,
    space: Space,
    h_values: Sequence[float],
    window_radius: float,
    spec: Optional[QuadratureSpec] = None,
    use_certified: bool = True,
) -> float:
    """Max of the local seminorms over a grid of window scales.

    A grid restriction of the true sup over all h > 0, hence a lower
    estimate; for the shipped extremal families the maximizing scale is a
    member of any grid containing their construction scale.
    """
    vals = [
        seminorm_local(f, space, h, window_radius, spec, use_certified=use_certified)
        for h in h_values
    ]
    if not vals:
        raise ValueError("h grid must be nonempty")
    return float(max(vals))


def holder_lower_estimate(
    f: FunctionModel,
    space: Space,
    omega: Modulus,
    pairs: tuple[np.ndarray, np.ndarray],
) -> float:
    """Max of ``|f(x) - f(y)| / omega(rho(x, y))`` over supplied point pairs."""
    xs, ys = pairs
    xs = np.atleast_2d(np.asarray(xs, dtype=np.float64))
    ys = np.atleast_2d(np.asarray(ys, dtype=np.float64))
    if xs.shape != ys.shape:
        raise ValueError("pair arrays must have matching shapes")
    dist = space.distance(xs, ys)
    if np.any(dist == 0.0):
        raise ValueError("coincident pair: the smoothness ratio is undefined")
    wv = np.asarray(omega(dist), dtype=np.float64)
    num = np.abs(f(xs) - f(ys))
    est = float(np.max(num / wv))
    _check_certified_upper(est, f.certified_holder_bound, "smoothness constant")
    return est
